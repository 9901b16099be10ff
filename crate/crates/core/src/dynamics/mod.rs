//! Time evolution of the amplitude equations under a drifting well, with
//! observables tracked in the co-moving frame.

mod lifetime;
mod propagate;
mod reference;

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DwmError, Result};
use crate::io::fmt17;
use crate::lattice::{Boundary, LatticeModel, PotentialSpec};
use crate::state::{center_of_mass, localized_fraction, norm_sq, WaveState};

pub use lifetime::{fit_exponential_decay, Lifetime, MIN_FIT_POINTS, TAU_CAP};
pub use propagate::{rhs, rk4_step, rk4_step_chain};
pub use reference::{harmonic_ground_state, harmonic_width_sq, ComovingReference, Profile};

use propagate::Propagator;

/// Largest fixed step accepted.
pub const MAX_FIXED_DT: f64 = 0.05;
pub const DEFAULT_DT: f64 = 0.01;
/// Open-boundary runs fail once |‖c‖² − ‖c₀‖²| exceeds this.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;
pub const MIN_ADAPTIVE_DT: f64 = 1e-6;
/// Sites at each lattice end watched for boundary contamination.
pub const EDGE_SITES: usize = 10;
pub const EDGE_NORM_LIMIT: f64 = 1e-4;
/// |z| bound of the RK4 stability region on the imaginary axis.
const RK4_IMAGINARY_LIMIT: f64 = 2.0 * std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepMode {
    Fixed,
    /// Step doubling with Richardson error estimate |y_{h/2} − y_h|/15.
    Adaptive {
        rel_tol: f64,
        abs_tol: f64,
    },
}

impl StepMode {
    pub fn adaptive_default() -> Self {
        StepMode::Adaptive {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    /// Fixed step, or the initial step in adaptive mode.
    pub dt: f64,
    pub mode: StepMode,
    pub t_max: f64,
    /// Snapshots every `record_stride` steps of size `dt`.
    pub record_stride: usize,
    /// Half-width of the co-moving window used by the localization series.
    pub half_window: f64,
    /// Mode profile for the co-moving overlap series.
    pub reference: Option<ComovingReference>,
    /// Integrate in a frame rotating at the initial mean energy; the phase is
    /// removed again before anything is recorded.
    pub rotating_frame: bool,
}

impl EvolutionConfig {
    pub fn fixed(dt: f64, t_max: f64, record_stride: usize) -> Self {
        Self {
            dt,
            mode: StepMode::Fixed,
            t_max,
            record_stride,
            half_window: 30.0,
            reference: None,
            rotating_frame: true,
        }
    }

    pub fn with_window(mut self, half_window: f64) -> Self {
        self.half_window = half_window;
        self
    }

    pub fn with_reference(mut self, reference: ComovingReference) -> Self {
        self.reference = Some(reference);
        self
    }

    pub fn with_mode(mut self, mode: StepMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(DwmError::InvalidParameter(m));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return bad(format!("t_max must be positive, got {}", self.t_max));
        }
        if self.record_stride == 0 {
            return bad("record stride must be at least 1".into());
        }
        if self.half_window.is_nan() || self.half_window < 0.0 {
            return bad("co-moving window must be non-negative".into());
        }
        match self.mode {
            StepMode::Fixed if self.dt > MAX_FIXED_DT => {
                bad(format!("fixed step {} exceeds {MAX_FIXED_DT}", self.dt))
            }
            StepMode::Adaptive { rel_tol, abs_tol } if !(rel_tol > 0.0 && abs_tol > 0.0) => {
                bad("adaptive tolerances must be positive".into())
            }
            _ => Ok(()),
        }
    }
}

/// Time series recorded alongside the snapshots, one entry per snapshot.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub t: Vec<f64>,
    pub norm_sq: Vec<f64>,
    /// Norm fraction inside the co-moving window.
    pub localized_fraction: Vec<f64>,
    /// NaN when no reference profile was configured.
    pub comoving_overlap: Vec<f64>,
    pub center_of_mass: Vec<f64>,
    /// 1 − localized_fraction.
    pub tail_norm: Vec<f64>,
    /// Norm on the outer EDGE_SITES sites at each end.
    pub edge_norm: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub snapshots: Vec<WaveState>,
    pub series: Series,
    /// Well center x_c(t) at each snapshot.
    pub well_center: Vec<f64>,
    pub steps: usize,
    pub rejected_steps: usize,
    /// Open-boundary run whose edge norm exceeded EDGE_NORM_LIMIT.
    pub boundary_contaminated: bool,
}

impl TrajectoryRecord {
    pub fn final_state(&self) -> &WaveState {
        // unwrap: the initial state is always recorded
        self.snapshots.last().unwrap()
    }

    pub fn max_norm_drift(&self) -> f64 {
        let n0 = self.series.norm_sq[0];
        self.series
            .norm_sq
            .iter()
            .fold(0.0f64, |m, n| m.max((n - n0).abs()))
    }

    pub fn max_edge_norm(&self) -> f64 {
        self.series.edge_norm.iter().fold(0.0f64, |m, v| m.max(*v))
    }

    /// `t,norm,locfrac,overlap,com,tail` rows.
    pub fn series_csv(&self) -> String {
        let s = &self.series;
        let mut out = String::from("t,norm,locfrac,overlap,com,tail\n");
        for i in 0..s.t.len() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                fmt17(s.t[i]),
                fmt17(s.norm_sq[i]),
                fmt17(s.localized_fraction[i]),
                fmt17(s.comoving_overlap[i]),
                fmt17(s.center_of_mass[i]),
                fmt17(s.tail_norm[i])
            );
        }
        out
    }

    /// |c_n| matrix: one row per snapshot, one column per site.
    pub fn amplitude_map_csv(&self) -> String {
        let mut out = String::new();
        for snap in &self.snapshots {
            let row: Vec<String> = snap.amplitudes().iter().map(|c| fmt17(c.norm())).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Survival-type series a lifetime can be fitted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurvivalObservable {
    ComovingOverlap,
    LocalizedFraction,
}

/// Fit τ to the chosen survival series over `fit_window`.
pub fn estimate_lifetime(
    traj: &TrajectoryRecord,
    fit_window: (f64, f64),
    observable: SurvivalObservable,
) -> Result<Lifetime> {
    let values = match observable {
        SurvivalObservable::ComovingOverlap => &traj.series.comoving_overlap,
        SurvivalObservable::LocalizedFraction => &traj.series.localized_fraction,
    };
    fit_exponential_decay(&traj.series.t, values, fit_window)
}

/// Default fit window: from 0.1·t_max to t_max.
pub fn default_fit_window(t_max: f64) -> (f64, f64) {
    (0.1 * t_max, t_max)
}

/// Norm fraction outside the co-moving window.
pub fn radiation_tail_norm(state: &WaveState, center: f64, half_window: f64) -> f64 {
    1.0 - localized_fraction(state, center, half_window)
}

fn edge_norm(amps: &[Complex64]) -> f64 {
    let k = EDGE_SITES.min(amps.len() / 2);
    amps[..k]
        .iter()
        .chain(&amps[amps.len() - k..])
        .map(|c| c.norm_sqr())
        .sum()
}

/// ⟨c|H(t)|c⟩/⟨c|c⟩ (Hermitian part only).
pub fn energy_expectation(
    state: &WaveState,
    spec: &PotentialSpec,
    model: &LatticeModel,
) -> Result<f64> {
    let mut pot = vec![0.0; model.sites()];
    spec.fill(model, state.t, &mut pot)?;
    let c = state.amplitudes();
    let n2 = norm_sq(state);
    if n2 == 0.0 {
        return Err(DwmError::ZeroState);
    }
    let mut e = 0.0;
    for i in 0..c.len() {
        e += pot[i] * c[i].norm_sqr();
        if i + 1 < c.len() {
            e -= 2.0 * (c[i].conj() * c[i + 1]).re;
        }
    }
    Ok(e / n2)
}

struct Recorder<'a> {
    cfg: &'a EvolutionConfig,
    spec: &'a PotentialSpec,
    offset: f64,
    record: TrajectoryRecord,
}

impl Recorder<'_> {
    fn push(&mut self, c: &[Complex64], t: f64) {
        let lab: Vec<Complex64> = if self.offset == 0.0 {
            c.to_vec()
        } else {
            let phase = Complex64::from_polar(1.0, -self.offset * t);
            c.iter().map(|a| a * phase).collect()
        };
        // unwrap: length was validated against the lattice
        let snap = WaveState::new(lab, t).unwrap();
        let xc = self.spec.well_center(t);
        let s = &mut self.record.series;
        let loc = localized_fraction(&snap, xc, self.cfg.half_window);
        s.t.push(t);
        s.norm_sq.push(norm_sq(&snap));
        s.localized_fraction.push(loc);
        s.tail_norm.push(1.0 - loc);
        s.comoving_overlap.push(
            self.cfg
                .reference
                .as_ref()
                .map_or(f64::NAN, |r| r.overlap(snap.amplitudes(), t)),
        );
        s.center_of_mass.push(center_of_mass(&snap));
        s.edge_norm.push(edge_norm(snap.amplitudes()));
        self.record.well_center.push(xc);
        self.record.snapshots.push(snap);
    }
}

/// Integrate from `state0.t` to `state0.t + cfg.t_max`.
pub fn evolve(
    state0: &WaveState,
    spec: &PotentialSpec,
    model: &LatticeModel,
    cfg: &EvolutionConfig,
) -> Result<TrajectoryRecord> {
    cfg.validate()?;
    spec.validate()?;
    if state0.len() != model.sites() {
        return Err(DwmError::LengthMismatch {
            expected: model.sites(),
            got: state0.len(),
        });
    }
    let n0 = norm_sq(state0);
    if n0 == 0.0 {
        return Err(DwmError::ZeroState);
    }
    if cfg.mode == StepMode::Fixed {
        let h_norm = spec.max_abs_over(model, state0.t + cfg.t_max)? + 2.0;
        if cfg.dt * h_norm > RK4_IMAGINARY_LIMIT {
            return Err(DwmError::UnstableStep {
                dt: cfg.dt,
                product: cfg.dt * h_norm,
            });
        }
    }
    let open = model.boundary() == Boundary::Open;
    let offset = if cfg.rotating_frame {
        energy_expectation(state0, spec, model)?
    } else {
        0.0
    };

    let t0 = state0.t;
    let mut prop = Propagator::new(spec, model, offset)?;
    let mut rec = Recorder {
        cfg,
        spec,
        offset,
        record: TrajectoryRecord {
            snapshots: Vec::new(),
            series: Series::default(),
            well_center: Vec::new(),
            steps: 0,
            rejected_steps: 0,
            boundary_contaminated: false,
        },
    };
    // rotating-frame amplitudes c·e^{i·offset·t}
    let mut c: Vec<Complex64> = {
        let phase = Complex64::from_polar(1.0, offset * t0);
        state0.amplitudes().iter().map(|a| a * phase).collect()
    };
    rec.push(&c, t0);

    let check_norm = |c: &[Complex64], t: f64| -> Result<()> {
        if open {
            let drift = (c.iter().map(|a| a.norm_sqr()).sum::<f64>() - n0).abs();
            if drift > NORM_DRIFT_LIMIT * n0 {
                return Err(DwmError::NormDrift { drift, t });
            }
        }
        Ok(())
    };

    match cfg.mode {
        StepMode::Fixed => {
            let n_steps = (cfg.t_max / cfg.dt - 1e-9).ceil().max(1.0) as usize;
            let h = cfg.t_max / n_steps as f64;
            for i in 0..n_steps {
                let t = t0 + i as f64 * h;
                prop.step(&mut c, t, h)?;
                let done = i + 1;
                if done % cfg.record_stride == 0 || done == n_steps {
                    let t_now = t0 + done as f64 * h;
                    check_norm(&c, t_now)?;
                    rec.push(&c, t_now);
                }
            }
            rec.record.steps = n_steps;
        }
        StepMode::Adaptive { rel_tol, abs_tol } => {
            let interval = cfg.dt * cfg.record_stride as f64;
            let n_records = (cfg.t_max / interval - 1e-9).ceil().max(1.0) as usize;
            let mut t = t0;
            let mut h = cfg.dt;
            let mut half = c.clone();
            let mut full = c.clone();
            for r in 1..=n_records {
                let target = t0 + (r as f64 * interval).min(cfg.t_max);
                while t < target {
                    let h_try = h.min(target - t);
                    full.copy_from_slice(&c);
                    prop.step(&mut full, t, h_try)?;
                    half.copy_from_slice(&c);
                    prop.step(&mut half, t, 0.5 * h_try)?;
                    prop.step(&mut half, t + 0.5 * h_try, 0.5 * h_try)?;
                    let err = half
                        .iter()
                        .zip(&full)
                        .zip(&c)
                        .map(|((a, b), y)| {
                            let scale = abs_tol + rel_tol * a.norm().max(y.norm());
                            (a - b).norm() / (15.0 * scale)
                        })
                        .fold(0.0f64, f64::max);
                    let factor = if err == 0.0 {
                        4.0
                    } else {
                        (0.9 * err.powf(-0.2)).clamp(0.2, 4.0)
                    };
                    if err <= 1.0 {
                        c.copy_from_slice(&half);
                        // land exactly on the record time
                        t = if h_try == target - t {
                            target
                        } else {
                            t + h_try
                        };
                        rec.record.steps += 1;
                        if h_try == h {
                            h *= factor;
                        }
                    } else {
                        rec.record.rejected_steps += 1;
                        h = h_try * factor;
                        if h < MIN_ADAPTIVE_DT {
                            return Err(DwmError::StepUnderflow { t, dt: h });
                        }
                    }
                }
                check_norm(&c, t)?;
                rec.push(&c, t);
            }
        }
    }

    let mut record = rec.record;
    record.boundary_contaminated = open && record.max_edge_norm() > EDGE_NORM_LIMIT;
    Ok(record)
}
