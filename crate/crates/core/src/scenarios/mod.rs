//! Built-in scenarios and parameter sweeps with their output files.
//!
//! Built-in scenarios:
//!
//! | id | what runs |
//! |----|-----------|
//! | `fig2`, `fig3` | spectrum of the static Pöschl–Teller well (ν = 0.97 / 1.27, a/l = 0.2, 401 sites) |
//! | `fig4a`–`fig4d` | even (a, b) or odd (c, d) mode of the ν = 1.27 well released in the ν = 0.97 well at rest (a, c) or drifting at v = 1.5 (b, d), κt = 200, 801 sites |
//! | `fig5a`–`fig5c` | mass-corrected oscillator ground state in the harmonic well Ωa² = 0.02 drifting at v = 0.5, 1.5, 1.8 from site 70, κt = 80, 401 sites |
//! | `custom` | driven entirely by overrides, see [`ScenarioConfig`] |

mod config;
mod plot;
mod summary;
mod sweep;

use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::boost::{boosted_initial_state, effective_depth, solve_boost, BoostParameters};
use crate::dynamics::{
    default_fit_window, estimate_lifetime, evolve, harmonic_ground_state, harmonic_width_sq,
    ComovingReference, EvolutionConfig, Profile, SurvivalObservable, TrajectoryRecord,
    EDGE_NORM_LIMIT, EDGE_SITES, NORM_DRIFT_LIMIT, TAU_CAP,
};
use crate::error::{DwmError, Result};
use crate::io::fmt17;
use crate::lattice::{sample_potential, LatticeModel, PotentialSpec};
use crate::spectral::{
    assemble_hamiltonian, band_tolerance, bound_spectrum, bound_threshold, predicted_bound_count,
    pt_analytic_levels, sturm_count_below, SpectrumReport,
};
use crate::state::{inner_product, WaveState};

pub use config::{
    BoostPhase, InitialState, OutputFormat, ScenarioConfig, ScenarioId, OVERRIDE_KEYS,
};
pub use summary::{
    extended_f64, BoostSummary, BoundStateSummary, DynamicsSummary, LatticeSummary,
    LifetimeSummary, SpectrumSummary, Summary, Thresholds, WellSummary,
};
pub use sweep::{sweep, sweep_csv, SweepConfig, SweepRow};

pub const FIGURE_SITES: usize = 401;
pub const FIG4_SITES: usize = 801;
pub const REST_NU: f64 = 0.97;
pub const MODE_NU: f64 = 1.27;
/// a/l for every Pöschl–Teller figure.
pub const RATIO: f64 = 0.2;
pub const FIG4_VELOCITY: f64 = 1.5;
pub const FIG4_TMAX: f64 = 200.0;
pub const FIG4_DT: f64 = 0.01;
pub const FIG4_WINDOW: f64 = 30.0;
pub const FIG5_OMEGA_A2: f64 = 0.02;
pub const FIG5_CENTER: f64 = 70.0;
pub const FIG5_TMAX: f64 = 80.0;
/// Keeps dt·max|H| inside the RK4 stability interval for the steep
/// oscillator walls and resolves the radiation tail.
pub const FIG5_DT: f64 = 0.0005;
pub const FIG5_WINDOW: f64 = 25.0;
pub const FIG5_VELOCITIES: [f64; 3] = [0.5, 1.5, 1.8];
/// Fraction inside the co-moving window that counts as localized.
pub const LOCALIZED_MIN: f64 = 0.9;
/// Fraction below which a state counts as spread.
pub const SPREAD_MAX: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
enum Plan {
    Spectrum {
        sites: usize,
        nu: f64,
        ratio: f64,
    },
    DriftingPt {
        mode_sites: usize,
        sites: usize,
        nu: f64,
        /// Depth of the well the initial mode comes from; `None` → ν*.
        mode_nu: Option<f64>,
        mode: usize,
        ratio: f64,
        velocity: f64,
        center0: Option<f64>,
        dt: f64,
        t_max: f64,
        window: f64,
        stride: Option<usize>,
    },
    DriftingHarmonic {
        sites: usize,
        omega: f64,
        velocity: f64,
        center0: f64,
        dt: f64,
        t_max: f64,
        window: f64,
        stride: Option<usize>,
    },
}

fn fig4(mode: usize, velocity: f64) -> Plan {
    Plan::DriftingPt {
        mode_sites: FIGURE_SITES,
        sites: FIG4_SITES,
        nu: REST_NU,
        mode_nu: Some(MODE_NU),
        mode,
        ratio: RATIO,
        velocity,
        center0: None,
        dt: FIG4_DT,
        t_max: FIG4_TMAX,
        window: FIG4_WINDOW,
        stride: None,
    }
}

fn fig5(velocity: f64) -> Plan {
    Plan::DriftingHarmonic {
        sites: FIGURE_SITES,
        omega: FIG5_OMEGA_A2,
        velocity,
        center0: FIG5_CENTER,
        dt: FIG5_DT,
        t_max: FIG5_TMAX,
        window: FIG5_WINDOW,
        stride: None,
    }
}

fn base_plan(cfg: &ScenarioConfig) -> Plan {
    match cfg.id {
        ScenarioId::Fig2 => Plan::Spectrum {
            sites: FIGURE_SITES,
            nu: REST_NU,
            ratio: RATIO,
        },
        ScenarioId::Fig3 => Plan::Spectrum {
            sites: FIGURE_SITES,
            nu: MODE_NU,
            ratio: RATIO,
        },
        ScenarioId::Fig4a => fig4(0, 0.0),
        ScenarioId::Fig4b => fig4(0, FIG4_VELOCITY),
        ScenarioId::Fig4c => fig4(1, 0.0),
        ScenarioId::Fig4d => fig4(1, FIG4_VELOCITY),
        ScenarioId::Fig5a => fig5(FIG5_VELOCITIES[0]),
        ScenarioId::Fig5b => fig5(FIG5_VELOCITIES[1]),
        ScenarioId::Fig5c => fig5(FIG5_VELOCITIES[2]),
        ScenarioId::Custom if cfg.get("omega_a2").is_some() => fig5(0.0),
        ScenarioId::Custom => Plan::DriftingPt {
            mode_sites: FIGURE_SITES,
            sites: FIG4_SITES,
            nu: REST_NU,
            mode_nu: None,
            mode: 0,
            ratio: RATIO,
            velocity: 0.0,
            center0: None,
            dt: FIG4_DT,
            t_max: FIG4_TMAX,
            window: FIG4_WINDOW,
            stride: None,
        },
    }
}

fn resolve(cfg: &ScenarioConfig) -> Result<Plan> {
    cfg.validate()?;
    let mut plan = base_plan(cfg);
    match &mut plan {
        Plan::Spectrum { sites, nu, ratio } => {
            *sites = cfg.get_count("sites", *sites)?;
            *nu = cfg.get_or("nu", *nu);
            *ratio = cfg.get_or("ratio", *ratio);
        }
        Plan::DriftingPt {
            mode_sites,
            sites,
            nu,
            ratio,
            velocity,
            center0,
            dt,
            t_max,
            window,
            stride,
            ..
        } => {
            *sites = cfg.get_count("sites", *sites)?;
            *mode_sites = (*mode_sites).min(*sites);
            *nu = cfg.get_or("nu", *nu);
            *ratio = cfg.get_or("ratio", *ratio);
            *velocity = cfg.get_or("velocity", *velocity);
            *center0 = cfg.get("center").or(*center0);
            *dt = cfg.get_or("dt", *dt);
            *t_max = cfg.get_or("tmax", *t_max);
            *window = cfg.get_or("window", *window);
            *stride = cfg
                .get("stride")
                .map(|_| cfg.get_count("stride", 1))
                .transpose()?;
        }
        Plan::DriftingHarmonic {
            sites,
            omega,
            velocity,
            center0,
            dt,
            t_max,
            window,
            stride,
        } => {
            *sites = cfg.get_count("sites", *sites)?;
            *omega = cfg.get_or("omega_a2", *omega);
            *velocity = cfg.get_or("velocity", *velocity);
            *center0 = cfg.get_or("center", *center0);
            *dt = cfg.get_or("dt", *dt);
            *t_max = cfg.get_or("tmax", *t_max);
            *window = cfg.get_or("window", *window);
            *stride = cfg
                .get("stride")
                .map(|_| cfg.get_count("stride", 1))
                .transpose()?;
        }
    }
    Ok(plan)
}

/// Everything a scenario produced, before anything touches the disk.
#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    pub summary: Summary,
    /// `(file name, contents)` in write order.
    pub files: Vec<(String, String)>,
    pub spectrum: Option<SpectrumReport>,
    pub trajectory: Option<TrajectoryRecord>,
}

#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub summary: Summary,
    pub spectrum: Option<SpectrumReport>,
    pub trajectory: Option<TrajectoryRecord>,
}

/// Compute a scenario and write its files under `output_dir/<id>/`.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioResult> {
    let out = compute_scenario(cfg)?;
    let dir = cfg.scenario_dir();
    std::fs::create_dir_all(&dir)?;
    let mut files = Vec::with_capacity(out.files.len());
    for (name, contents) in &out.files {
        let path = dir.join(name);
        std::fs::write(&path, contents)?;
        files.push(path);
    }
    Ok(ScenarioResult {
        dir,
        files,
        summary: out.summary,
        spectrum: out.spectrum,
        trajectory: out.trajectory,
    })
}

/// Compute a scenario in memory.
pub fn compute_scenario(cfg: &ScenarioConfig) -> Result<ScenarioOutput> {
    let mut out = match resolve(cfg)? {
        Plan::Spectrum { sites, nu, ratio } => run_spectrum(cfg, sites, nu, ratio)?,
        Plan::DriftingPt {
            mode_sites,
            sites,
            nu,
            mode_nu,
            mode,
            ratio,
            velocity,
            center0,
            dt,
            t_max,
            window,
            stride,
        } => {
            let bp = solve_boost(velocity)?;
            let mode_nu = mode_nu.unwrap_or_else(|| effective_depth(nu, bp.mass_ratio));
            let center0 = center0.unwrap_or((velocity * t_max / 2.0).round());
            let mode = match cfg.init {
                Some(InitialState::Ground) => 0,
                Some(InitialState::Excited) => 1,
                _ => mode,
            };
            run_drifting_pt(
                cfg,
                DriftingPt {
                    mode_sites,
                    sites,
                    nu,
                    mode_nu,
                    mode,
                    ratio,
                    bp,
                    center0,
                    dt,
                    t_max,
                    window,
                    stride: stride.unwrap_or_else(|| stride_for(dt, 1.0)),
                },
            )?
        }
        Plan::DriftingHarmonic {
            sites,
            omega,
            velocity,
            center0,
            dt,
            t_max,
            window,
            stride,
        } => run_harmonic(
            cfg,
            sites,
            omega,
            solve_boost(velocity)?,
            center0,
            (
                dt,
                t_max,
                window,
                stride.unwrap_or_else(|| stride_for(dt, 0.2)),
            ),
        )?,
    };
    if cfg.wants(OutputFormat::Json) {
        let mut json = serde_json::to_string_pretty(&out.summary)?;
        json.push('\n');
        out.files.push(("summary.json".into(), json));
    }
    Ok(out)
}

/// Steps between snapshots so that they land every `every` time units.
fn stride_for(dt: f64, every: f64) -> usize {
    ((every / dt).round() as usize).max(1)
}

fn thresholds(model: &LatticeModel) -> Thresholds {
    Thresholds {
        localized_min_fraction: LOCALIZED_MIN,
        spread_max_fraction: SPREAD_MAX,
        band_tolerance: band_tolerance(model),
        edge_sites: EDGE_SITES,
        edge_norm_limit: EDGE_NORM_LIMIT,
        norm_drift_limit: NORM_DRIFT_LIMIT,
        tau_cap: TAU_CAP,
    }
}

fn boost_summary(bp: &BoostParameters, nu: Option<f64>) -> Result<BoostSummary> {
    Ok(BoostSummary {
        velocity: bp.v,
        qa: bp.qa,
        sin_qa: bp.sin_qa(),
        gamma: bp.gamma,
        mass_ratio: bp.mass_ratio,
        nu_star: nu.map(|nu| effective_depth(nu, bp.mass_ratio)),
        predicted_bound_count: nu.map(|nu| predicted_bound_count(nu, bp.v)).transpose()?,
    })
}

fn lattice_summary(model: &LatticeModel, mode_sites: Option<usize>) -> LatticeSummary {
    LatticeSummary {
        sites: model.sites(),
        boundary: "open".into(),
        mode_sites,
    }
}

fn potential_csv(spec: &PotentialSpec, model: &LatticeModel) -> Result<String> {
    let v = sample_potential(spec, model, 0.0)?;
    let mut s = String::from("n,V\n");
    for (i, x) in v.iter().enumerate() {
        s.push_str(&format!("{},{}\n", model.site(i), fmt17(*x)));
    }
    Ok(s)
}

/// Static Pöschl–Teller spectrum with the Sturm cross-check.
fn pt_spectrum(
    model: &LatticeModel,
    nu: f64,
    ratio: f64,
) -> Result<(SpectrumReport, SpectrumSummary, PotentialSpec)> {
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(DwmError::InvalidParameter(format!(
            "a/l must be positive, got {ratio}"
        )));
    }
    let spec = PotentialSpec::poschl_teller(nu, 1.0 / ratio);
    let report = bound_spectrum(model, &spec)?;
    let h = assemble_hamiltonian(model, &spec, 0.0)?;
    let threshold = bound_threshold(model);
    let bound_states: Vec<BoundStateSummary> = (0..report.len())
        .filter(|&j| report.bound[j])
        .map(|j| BoundStateSummary {
            index: j,
            energy: report.eigenvalues[j],
            participation: report.participation[j],
            localized_by_participation: report.localized[j],
            parity: report.parity[j],
        })
        .collect();
    let summary = SpectrumSummary {
        nu,
        bound_count: report.bound_count(),
        sturm_count: sturm_count_below(&h, threshold),
        bound_threshold: threshold,
        min_eigenvalue: report.eigenvalues[0],
        min_participation: report
            .participation
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min),
        bound_states,
        participation_disagreements: report.disagreements(),
        analytic_levels: pt_analytic_levels(nu, 1.0 / ratio).energies,
    };
    Ok((report, summary, spec))
}

fn bound_state_csv(report: &SpectrumReport, j: usize, model: &LatticeModel) -> String {
    let mut s = String::from("n,amplitude\n");
    for (i, x) in report.eigenvectors[j].iter().enumerate() {
        s.push_str(&format!("{},{}\n", model.site(i), fmt17(*x)));
    }
    s
}

fn run_spectrum(cfg: &ScenarioConfig, sites: usize, nu: f64, ratio: f64) -> Result<ScenarioOutput> {
    let model = LatticeModel::with_sites(sites)?;
    let (report, spectrum, spec) = pt_spectrum(&model, nu, ratio)?;
    let mut files = Vec::new();
    if cfg.wants(OutputFormat::Csv) {
        files.push(("spectrum.csv".into(), report.to_csv()));
        files.push(("potential.csv".into(), potential_csv(&spec, &model)?));
        let mut names = Vec::new();
        for b in &spectrum.bound_states {
            let name = format!("bound_state_{}.csv", b.index);
            files.push((name.clone(), bound_state_csv(&report, b.index, &model)));
            names.push(name);
        }
        files.push(("plot.gp".into(), plot::spectrum_script(&names)));
    }
    let bp = solve_boost(0.0)?;
    let summary = Summary {
        scenario: cfg.id,
        lattice: lattice_summary(&model, None),
        well: WellSummary::PoschlTeller {
            nu,
            ratio,
            center0: 0.0,
        },
        boost: boost_summary(&bp, Some(nu))?,
        spectrum: Some(spectrum),
        dynamics: None,
        thresholds: thresholds(&model),
        valid: true,
    };
    Ok(ScenarioOutput {
        summary,
        files,
        spectrum: Some(report),
        trajectory: None,
    })
}

/// Initial modes for the drifting-well runs of Fig. 4.
#[derive(Debug, Clone)]
pub struct Fig4Inputs {
    /// Even mode φ₀ of the static ν = 1.27 well.
    pub phi0: WaveState,
    /// Odd mode φ₁.
    pub phi1: WaveState,
    pub boosted0: WaveState,
    pub boosted1: WaveState,
    pub boost: BoostParameters,
    pub spectrum: SpectrumReport,
}

/// φ₀, φ₁ of the static ν = 1.27, a/l = 0.2 well on `model`, plus their
/// boosted copies for v = 1.5.
pub fn prepare_fig4_inputs(model: &LatticeModel) -> Result<Fig4Inputs> {
    let (report, _, _) = pt_spectrum(model, MODE_NU, RATIO)?;
    let found = report.bound_count();
    if found < 2 {
        return Err(DwmError::MissingBoundStates(found));
    }
    let boost = solve_boost(FIG4_VELOCITY)?;
    let (phi0, phi1) = (report.state(0), report.state(1));
    Ok(Fig4Inputs {
        boosted0: boosted_initial_state(&phi0, &boost),
        boosted1: boosted_initial_state(&phi1, &boost),
        phi0,
        phi1,
        boost,
        spectrum: report,
    })
}

/// Copy `state` onto a lattice of half-width `half_width`, moving its
/// center from site 0 to site `shift`.
pub fn embed(state: &WaveState, half_width: usize, shift: i64) -> Result<WaveState> {
    let m = state.half_width() as i64;
    let big = half_width as i64;
    if shift - m < -big || shift + m > big {
        return Err(DwmError::InvalidParameter(format!(
            "a {}-site state centered at {shift} does not fit on {} sites",
            state.len(),
            2 * half_width + 1
        )));
    }
    let src = state.amplitudes();
    let mut out = WaveState::from_fn(half_width, state.t, |_| Default::default());
    for (i, c) in src.iter().enumerate() {
        let n = state.site(i) + shift;
        out.amplitudes_mut()[(n + big) as usize] = *c;
    }
    Ok(out)
}

struct DriftingPt {
    mode_sites: usize,
    sites: usize,
    nu: f64,
    mode_nu: f64,
    mode: usize,
    ratio: f64,
    bp: BoostParameters,
    center0: f64,
    dt: f64,
    t_max: f64,
    window: f64,
    stride: usize,
}

/// The co-moving gauge factor, or none when the config asks for bare states.
fn gauge(cfg: &ScenarioConfig, bp: &BoostParameters) -> BoostParameters {
    match cfg.boost_phase {
        BoostPhase::Auto => *bp,
        BoostPhase::None => BoostParameters { qa: 0.0, ..*bp },
    }
}

fn load_state(path: &Path, model: &LatticeModel) -> Result<WaveState> {
    let state = WaveState::from_csv(&std::fs::read_to_string(path)?)?;
    if state.len() != model.sites() {
        return Err(DwmError::LengthMismatch {
            expected: model.sites(),
            got: state.len(),
        });
    }
    state.normalized()
}

fn mode_label(mode: usize) -> &'static str {
    if mode == 0 {
        "ground"
    } else {
        "excited"
    }
}

fn run_drifting_pt(cfg: &ScenarioConfig, p: DriftingPt) -> Result<ScenarioOutput> {
    let model = LatticeModel::with_sites(p.sites)?;
    // the mode lattice shrinks so the embedded mode stays on the grid
    let room = model.half_width().saturating_sub(p.center0.abs() as usize);
    let mode_model = LatticeModel::with_sites(p.mode_sites.min(2 * room + 1))?;
    let (report, spectrum, _) = pt_spectrum(&mode_model, p.mode_nu, p.ratio)?;
    if p.center0.fract() != 0.0 {
        return Err(DwmError::IncompatibleCenter(p.center0));
    }
    let phase = gauge(cfg, &p.bp);
    let (rest, profile, label) = match &cfg.init {
        Some(InitialState::File(path)) => (
            load_state(path, &model)?,
            None,
            format!("file {}", path.display()),
        ),
        _ => {
            if report.bound_count() <= p.mode {
                return Err(DwmError::MissingBoundStates(report.bound_count()));
            }
            let phi = report.state(p.mode);
            (
                embed(&phi, model.half_width(), p.center0 as i64)?,
                Some(Profile::sampled_from(&phi)),
                format!("{} mode of the nu={} well", mode_label(p.mode), p.mode_nu),
            )
        }
    };
    let state0 = boosted_initial_state(&rest, &phase);
    let spec = PotentialSpec::poschl_teller(p.nu, 1.0 / p.ratio)
        .with_drift(p.bp.v)
        .centered_at(p.center0);
    let mut evo = EvolutionConfig::fixed(p.dt, p.t_max, p.stride).with_window(p.window);
    if let Some(profile) = profile {
        evo = evo.with_reference(ComovingReference::new(profile, &phase, p.center0));
    }
    let traj = evolve(&state0, &spec, &model, &evo)?;
    let dynamics = dynamics_summary(&traj, &evo, with_phase_note(label, &phase));
    let mut files = Vec::new();
    if cfg.wants(OutputFormat::Csv) {
        files.push(("spectrum.csv".into(), report.to_csv()));
        push_trajectory_files(&mut files, &spec, &model, &state0, &traj, &evo)?;
    }
    let summary = Summary {
        scenario: cfg.id,
        lattice: lattice_summary(&model, Some(mode_model.sites())),
        well: WellSummary::PoschlTeller {
            nu: p.nu,
            ratio: p.ratio,
            center0: p.center0,
        },
        boost: boost_summary(&p.bp, Some(p.nu))?,
        spectrum: Some(spectrum),
        valid: !dynamics.boundary_contaminated,
        dynamics: Some(dynamics),
        thresholds: thresholds(&model),
    };
    Ok(ScenarioOutput {
        summary,
        files,
        spectrum: Some(report),
        trajectory: Some(traj),
    })
}

fn with_phase_note(label: String, phase: &BoostParameters) -> String {
    if phase.qa != 0.0 {
        format!("{label}, boosted")
    } else {
        label
    }
}

/// ξ·exp(−ξ²/(2σ²)) sampled at integer offsets, for the odd oscillator mode.
fn harmonic_excited_profile(sigma2: f64) -> Profile {
    let k = (8.0 * sigma2.sqrt()).ceil() as i64;
    Profile::Sampled {
        values: (-k..=k)
            .map(|j| {
                let x = j as f64;
                x * (-x * x / (2.0 * sigma2)).exp()
            })
            .collect(),
    }
}

fn run_harmonic(
    cfg: &ScenarioConfig,
    sites: usize,
    omega: f64,
    bp: BoostParameters,
    center0: f64,
    (dt, t_max, window, stride): (f64, f64, f64, usize),
) -> Result<ScenarioOutput> {
    let model = LatticeModel::with_sites(sites)?;
    let phase = gauge(cfg, &bp);
    let sigma2 = harmonic_width_sq(omega, bp.mass_ratio);
    let (rest, profile, label) = match &cfg.init {
        Some(InitialState::File(path)) => (
            load_state(path, &model)?,
            None,
            format!("file {}", path.display()),
        ),
        Some(InitialState::Excited) => {
            // validates Ω and the width
            harmonic_ground_state(&model, omega, bp.mass_ratio, center0)?;
            let state = WaveState::from_fn(model.half_width(), 0.0, |n| {
                let x = n as f64 - center0;
                Complex64::new(x * (-x * x / (2.0 * sigma2)).exp(), 0.0)
            })
            .normalized()?;
            (
                state,
                Some(harmonic_excited_profile(sigma2)),
                "mass-corrected oscillator first excited state".to_string(),
            )
        }
        _ => (
            harmonic_ground_state(&model, omega, bp.mass_ratio, center0)?,
            Some(Profile::Gaussian { sigma2 }),
            "mass-corrected oscillator ground state".to_string(),
        ),
    };
    let state0 = boosted_initial_state(&rest, &phase);
    let spec = PotentialSpec::harmonic(omega)
        .with_drift(bp.v)
        .centered_at(center0);
    let mut evo = EvolutionConfig::fixed(dt, t_max, stride).with_window(window);
    if let Some(profile) = profile {
        evo = evo.with_reference(ComovingReference::new(profile, &phase, center0));
    }
    let traj = evolve(&state0, &spec, &model, &evo)?;
    let dynamics = dynamics_summary(&traj, &evo, with_phase_note(label, &phase));
    let mut files = Vec::new();
    if cfg.wants(OutputFormat::Csv) {
        push_trajectory_files(&mut files, &spec, &model, &state0, &traj, &evo)?;
    }
    let summary = Summary {
        scenario: cfg.id,
        lattice: lattice_summary(&model, None),
        well: WellSummary::Harmonic {
            omega_a2: omega,
            center0,
        },
        boost: boost_summary(&bp, None)?,
        spectrum: None,
        valid: !dynamics.boundary_contaminated,
        dynamics: Some(dynamics),
        thresholds: thresholds(&model),
    };
    Ok(ScenarioOutput {
        summary,
        files,
        spectrum: None,
        trajectory: Some(traj),
    })
}

fn push_trajectory_files(
    files: &mut Vec<(String, String)>,
    spec: &PotentialSpec,
    model: &LatticeModel,
    state0: &WaveState,
    traj: &TrajectoryRecord,
    evo: &EvolutionConfig,
) -> Result<()> {
    files.push(("potential.csv".into(), potential_csv(spec, model)?));
    files.push(("initial_state.csv".into(), state0.to_csv()));
    files.push(("final_state.csv".into(), traj.final_state().to_csv()));
    files.push(("series.csv".into(), traj.series_csv()));
    files.push(("amplitude_map.csv".into(), traj.amplitude_map_csv()));
    files.push((
        "plot.gp".into(),
        plot::evolution_script(model.half_width(), evo.dt * evo.record_stride as f64),
    ));
    Ok(())
}

fn lifetime_summary(
    traj: &TrajectoryRecord,
    window: (f64, f64),
    obs: SurvivalObservable,
) -> LifetimeSummary {
    let observable = match obs {
        SurvivalObservable::ComovingOverlap => "comoving_overlap",
        SurvivalObservable::LocalizedFraction => "localized_fraction",
    }
    .to_string();
    match estimate_lifetime(traj, window, obs) {
        Ok(l) => LifetimeSummary {
            observable,
            tau: l.tau,
            r_squared: l.r_squared,
            points: l.points,
            error: None,
        },
        Err(e) => LifetimeSummary {
            observable,
            tau: f64::NAN,
            r_squared: f64::NAN,
            points: 0,
            error: Some(e.to_string()),
        },
    }
}

fn dynamics_summary(
    traj: &TrajectoryRecord,
    evo: &EvolutionConfig,
    initial_state: String,
) -> DynamicsSummary {
    let s = &traj.series;
    let last = s.t.len() - 1;
    let fit = default_fit_window(evo.t_max);
    let frac = s.localized_fraction[last];
    DynamicsSummary {
        initial_state,
        dt: evo.dt,
        step_mode: "fixed".into(),
        t_max: evo.t_max,
        record_stride: evo.record_stride,
        steps: traj.steps,
        half_window: evo.half_window,
        final_well_center: traj.well_center[last],
        final_localized_fraction: frac,
        localized: frac >= LOCALIZED_MIN,
        spread: frac < SPREAD_MAX,
        final_tail_norm: s.tail_norm[last],
        final_overlap: s.comoving_overlap[last],
        max_norm_drift: traj.max_norm_drift(),
        max_edge_norm: traj.max_edge_norm(),
        boundary_contaminated: traj.boundary_contaminated,
        fit_window: [fit.0, fit.1],
        lifetime: lifetime_summary(traj, fit, SurvivalObservable::LocalizedFraction),
        overlap_lifetime: lifetime_summary(traj, fit, SurvivalObservable::ComovingOverlap),
    }
}

/// ⟨φ₀|φ₁⟩ for the Fig. 4 modes (should vanish).
pub fn fig4_mode_overlap(inputs: &Fig4Inputs) -> Result<f64> {
    Ok(inner_product(&inputs.phi0, &inputs.phi1)?.norm())
}
