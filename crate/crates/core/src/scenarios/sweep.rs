//! Bound-state count of the drifting well over a (ν, v) grid: the count
//! predicted from ν* next to the number of boosted modes that actually stay
//! in the moving well.

use serde::{Deserialize, Serialize};

use crate::boost::{boosted_initial_state, effective_depth, solve_boost};
use crate::dynamics::{evolve, EvolutionConfig};
use crate::error::Result;
use crate::io::fmt17;
use crate::lattice::{LatticeModel, PotentialSpec};
use crate::spectral::{bound_spectrum, predicted_bound_count};

use super::{embed, LOCALIZED_MIN};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub nus: Vec<f64>,
    pub velocities: Vec<f64>,
    /// Lattice the probe modes are computed on.
    pub sites: usize,
    /// a/l.
    pub ratio: f64,
    pub t_probe: f64,
    pub dt: f64,
    pub half_window: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            nus: vec![0.5, 0.97, 1.27, 2.0],
            velocities: (0..20).map(|i| 0.1 * i as f64).collect(),
            sites: 401,
            ratio: 0.2,
            t_probe: 50.0,
            dt: 0.01,
            half_window: 30.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub nu: f64,
    pub v: f64,
    pub mass_ratio: Option<f64>,
    pub nu_star: Option<f64>,
    pub predicted_bound_count: Option<usize>,
    /// Boosted modes of the static ν* well still localized at `t_probe`.
    pub measured_localized_modes: Option<usize>,
    pub error: Option<String>,
}

/// One row per (ν, v) pair, ν-major. Cell failures land in `error`.
pub fn sweep(cfg: &SweepConfig) -> Vec<SweepRow> {
    let cells: Vec<(f64, f64)> = cfg
        .nus
        .iter()
        .flat_map(|&nu| cfg.velocities.iter().map(move |&v| (nu, v)))
        .collect();
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        cells.par_iter().map(|&(nu, v)| cell(cfg, nu, v)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        cells.iter().map(|&(nu, v)| cell(cfg, nu, v)).collect()
    }
}

fn cell(cfg: &SweepConfig, nu: f64, v: f64) -> SweepRow {
    let mut row = SweepRow {
        nu,
        v,
        mass_ratio: None,
        nu_star: None,
        predicted_bound_count: None,
        measured_localized_modes: None,
        error: None,
    };
    let bp = match solve_boost(v) {
        Ok(bp) => bp,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.mass_ratio = Some(bp.mass_ratio);
    row.nu_star = Some(effective_depth(nu, bp.mass_ratio));
    match predicted_bound_count(nu, v) {
        Ok(n) => row.predicted_bound_count = Some(n),
        Err(e) => row.error = Some(e.to_string()),
    }
    match probe(cfg, nu, v) {
        Ok(n) => row.measured_localized_modes = Some(n),
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Release every bound mode of the static ν* well, boosted, in the ν well
/// drifting at `v` and count those keeping ≥ 0.9 of their norm near it.
fn probe(cfg: &SweepConfig, nu: f64, v: f64) -> Result<usize> {
    let bp = solve_boost(v)?;
    let l = 1.0 / cfg.ratio;
    let mode_model = LatticeModel::with_sites(cfg.sites)?;
    let report = bound_spectrum(
        &mode_model,
        &PotentialSpec::poschl_teller(effective_depth(nu, bp.mass_ratio), l),
    )?;
    let shift = (v.abs() * cfg.t_probe / 2.0).ceil() as usize;
    let model = LatticeModel::open(mode_model.half_width() + shift)?;
    let center0 = (shift as f64).copysign(v);
    let spec = PotentialSpec::poschl_teller(nu, l)
        .with_drift(v)
        .centered_at(center0);
    let evo = EvolutionConfig::fixed(cfg.dt, cfg.t_probe, usize::MAX).with_window(cfg.half_window);
    let mut count = 0;
    for j in (0..report.len()).filter(|&j| report.bound[j]) {
        let placed = embed(&report.state(j), model.half_width(), center0 as i64)?;
        let traj = evolve(&boosted_initial_state(&placed, &bp), &spec, &model, &evo)?;
        // unwrap: at least the initial sample exists
        if *traj.series.localized_fraction.last().unwrap() >= LOCALIZED_MIN {
            count += 1;
        }
    }
    Ok(count)
}

fn opt_f64(x: Option<f64>) -> String {
    x.map(fmt17).unwrap_or_default()
}

fn opt_usize(x: Option<usize>) -> String {
    x.map(|n| n.to_string()).unwrap_or_default()
}

/// `nu,v,mass_ratio,nu_star,predicted,measured,error`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("nu,v,mass_ratio,nu_star,predicted,measured,error\n");
    for r in rows {
        let err = r.error.as_deref().unwrap_or("").replace([',', '\n'], ";");
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt17(r.nu),
            fmt17(r.v),
            opt_f64(r.mass_ratio),
            opt_f64(r.nu_star),
            opt_usize(r.predicted_bound_count),
            opt_usize(r.measured_localized_modes),
            err
        ));
    }
    out
}
