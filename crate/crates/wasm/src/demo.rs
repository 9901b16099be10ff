//! Plain-Rust state behind the browser bindings.

use serde::Serialize;

use dwm_core::scenarios::{embed, extended_f64};
use dwm_core::spectral::bound_spectrum;
use dwm_core::{
    boosted_initial_state, dispersion, effective_depth, localized_fraction, momentum_potential,
    momentum_potential_extrema, norm_sq, predicted_bound_count, rk4_step, sample_potential,
    solve_boost, DwmError, Extremum, LatticeModel, PotentialSpec, Result, WaveState,
};

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumView {
    pub sites: usize,
    pub eigenvalues: Vec<f64>,
    pub participation: Vec<f64>,
    pub bound: Vec<bool>,
    pub bound_count: usize,
    /// V_n over n = −M..M.
    pub potential: Vec<f64>,
    /// Eigenvectors of the bound levels, lowest first.
    pub bound_states: Vec<Vec<f64>>,
}

pub fn spectrum_view(sites: usize, nu: f64, ratio: f64) -> Result<SpectrumView> {
    if ratio.is_nan() || ratio <= 0.0 {
        return Err(DwmError::InvalidParameter("a/l must be positive".into()));
    }
    let model = LatticeModel::with_sites(sites)?;
    let spec = PotentialSpec::poschl_teller(nu, 1.0 / ratio);
    let report = bound_spectrum(&model, &spec)?;
    let bound_states = (0..report.len())
        .filter(|&j| report.bound[j])
        .map(|j| report.eigenvectors[j].clone())
        .collect();
    Ok(SpectrumView {
        sites,
        bound_count: report.bound_count(),
        potential: sample_potential(&spec, &model, 0.0)?,
        eigenvalues: report.eigenvalues,
        participation: report.participation,
        bound: report.bound,
        bound_states,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BoostView {
    pub v: f64,
    pub qa: f64,
    pub sin_qa: f64,
    #[serde(with = "extended_f64")]
    pub mass_ratio: f64,
    pub nu_star: Option<f64>,
    pub predicted_bound_count: Option<usize>,
    /// ka over [−π, π].
    pub k: Vec<f64>,
    pub energy: Vec<f64>,
    pub w: Vec<f64>,
    pub extrema: Vec<Extremum>,
}

pub fn boost_view(v: f64, nu: f64, points: usize) -> Result<BoostView> {
    let bp = solve_boost(v)?;
    let points = points.max(2);
    let pi = std::f64::consts::PI;
    let k: Vec<f64> = (0..points)
        .map(|i| -pi + 2.0 * pi * i as f64 / (points - 1) as f64)
        .collect();
    let finite = bp.mass_ratio.is_finite();
    Ok(BoostView {
        v,
        qa: bp.qa,
        sin_qa: bp.sin_qa(),
        mass_ratio: bp.mass_ratio,
        nu_star: finite.then(|| effective_depth(nu, bp.mass_ratio)),
        predicted_bound_count: if finite {
            Some(predicted_bound_count(nu, v)?)
        } else {
            None
        },
        energy: k.iter().map(|&x| dispersion(x, &bp)).collect(),
        w: k.iter().map(|&x| momentum_potential(x, v)).collect(),
        extrema: momentum_potential_extrema(v)
            .into_iter()
            .filter(|e| e.k.abs() <= pi)
            .collect(),
        k,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftParams {
    pub sites: usize,
    pub nu: f64,
    pub ratio: f64,
    pub velocity: f64,
    /// 0 for the ground mode, 1 for the first excited one.
    pub mode: usize,
    /// Imprint the co-moving phase on the initial mode.
    pub boost: bool,
    pub dt: f64,
    pub half_window: f64,
}

impl Default for DriftParams {
    fn default() -> Self {
        Self {
            sites: 401,
            nu: 0.97,
            ratio: 0.2,
            velocity: 1.5,
            mode: 0,
            boost: true,
            dt: 0.01,
            half_window: 30.0,
        }
    }
}

/// A bound mode of the mass-corrected well released into a drifting well.
#[derive(Debug, Clone)]
pub struct DriftingWell {
    params: DriftParams,
    model: LatticeModel,
    spec: PotentialSpec,
    state: WaveState,
    mode_available: bool,
}

impl DriftingWell {
    pub fn new(params: DriftParams) -> Result<Self> {
        let bp = solve_boost(params.velocity)?;
        if !bp.mass_ratio.is_finite() {
            return Err(DwmError::InvalidParameter(
                "the critical velocity leaves no bound mode".into(),
            ));
        }
        if [params.ratio, params.dt]
            .iter()
            .any(|x| x.is_nan() || *x <= 0.0)
        {
            return Err(DwmError::InvalidParameter(
                "a/l and dt must be positive".into(),
            ));
        }
        let model = LatticeModel::with_sites(params.sites)?;
        let m = model.half_width() as i64;
        // start half-way out so the well crosses the middle of the lattice
        let center0 = match params.velocity.partial_cmp(&0.0) {
            Some(std::cmp::Ordering::Greater) => m / 2,
            Some(std::cmp::Ordering::Less) => -m / 2,
            _ => 0,
        };
        let l = 1.0 / params.ratio;
        let nu_star = effective_depth(params.nu, bp.mass_ratio);
        let mode_model = LatticeModel::open((m - center0.abs()) as usize)?;
        let modes = bound_spectrum(&mode_model, &PotentialSpec::poschl_teller(nu_star, l))?;
        let mode_available = params.mode < modes.bound_count();
        let mode = params.mode.min(modes.len() - 1);
        let rest = embed(&modes.state(mode), model.half_width(), center0)?;
        let state = if params.boost {
            boosted_initial_state(&rest, &bp)
        } else {
            rest
        };
        let spec = PotentialSpec::poschl_teller(params.nu, l)
            .with_drift(params.velocity)
            .centered_at(center0 as f64);
        Ok(Self {
            params,
            model,
            spec,
            state,
            mode_available,
        })
    }

    pub fn params(&self) -> &DriftParams {
        &self.params
    }

    /// False when the requested mode is not bound in the ν* well.
    pub fn mode_available(&self) -> bool {
        self.mode_available
    }

    pub fn advance(&mut self, steps: usize) -> Result<()> {
        for _ in 0..steps {
            self.state = rk4_step(&self.state, &self.spec, &self.model, self.params.dt)?;
        }
        Ok(())
    }

    pub fn time(&self) -> f64 {
        self.state.t
    }

    pub fn half_width(&self) -> usize {
        self.model.half_width()
    }

    pub fn well_center(&self) -> f64 {
        self.spec.well_center(self.state.t)
    }

    pub fn density(&self) -> Vec<f64> {
        self.state
            .amplitudes()
            .iter()
            .map(|c| c.norm_sqr())
            .collect()
    }

    pub fn potential(&self) -> Result<Vec<f64>> {
        sample_potential(&self.spec, &self.model, self.state.t)
    }

    pub fn norm(&self) -> f64 {
        norm_sq(&self.state)
    }

    pub fn localized_fraction(&self) -> f64 {
        localized_fraction(&self.state, self.well_center(), self.params.half_window)
    }
}
