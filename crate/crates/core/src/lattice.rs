//! Lattice grid and the potential wells that live on it.
//!
//! Units throughout the crate: ħ = a = κ = 1, so the particle mass is
//! m = 1/(2κa²) = 1/2, velocities are in κa, energies in κ and times in 1/κ.
//! Sites are labelled n = −M..M and sit at x = n.

use serde::{Deserialize, Serialize};

use crate::error::{DwmError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Boundary {
    Open,
    /// Linear-ramp negative-imaginary potential on the outer `width` sites,
    /// reaching `strength` (in κ) on the last site.
    Absorbing {
        width: usize,
        strength: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeModel {
    half_width: usize,
    boundary: Boundary,
}

impl LatticeModel {
    pub fn new(half_width: usize, boundary: Boundary) -> Result<Self> {
        if half_width < 1 {
            return Err(DwmError::InvalidParameter(
                "lattice half-width M must be at least 1".into(),
            ));
        }
        if let Boundary::Absorbing { width, strength } = boundary {
            if width >= half_width {
                return Err(DwmError::InvalidParameter(format!(
                    "absorbing width {width} must be smaller than M = {half_width}"
                )));
            }
            if !(strength >= 0.0 && strength.is_finite()) {
                return Err(DwmError::InvalidParameter(format!(
                    "absorbing strength must be finite and non-negative, got {strength}"
                )));
            }
        }
        Ok(Self {
            half_width,
            boundary,
        })
    }

    pub fn open(half_width: usize) -> Result<Self> {
        Self::new(half_width, Boundary::Open)
    }

    /// Open lattice with `sites` sites; `sites` must be odd and ≥ 3.
    pub fn with_sites(sites: usize) -> Result<Self> {
        if sites < 3 || sites.is_multiple_of(2) {
            return Err(DwmError::InvalidParameter(format!(
                "site count must be odd and at least 3, got {sites}"
            )));
        }
        Self::open(sites / 2)
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn sites(&self) -> usize {
        2 * self.half_width + 1
    }

    /// Site label n of array index i.
    pub fn site(&self, index: usize) -> i64 {
        index as i64 - self.half_width as i64
    }

    pub fn position(&self, index: usize) -> f64 {
        self.site(index) as f64
    }

    pub fn index_of(&self, site: i64) -> Option<usize> {
        let i = site + self.half_width as i64;
        (0..self.sites() as i64).contains(&i).then_some(i as usize)
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.sites()).map(|i| self.position(i))
    }

    /// Absorption rates Γ_n ≥ 0; all zero for open boundaries.
    pub fn absorption_rates(&self) -> Vec<f64> {
        let n = self.sites();
        match self.boundary {
            Boundary::Open => vec![0.0; n],
            Boundary::Absorbing { width, strength } => (0..n)
                .map(|i| {
                    let from_edge = i.min(n - 1 - i);
                    if from_edge < width {
                        strength * (width - from_edge) as f64 / width as f64
                    } else {
                        0.0
                    }
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WellShape {
    /// 𝒱(x) = −ν(ν+1)/l² · sech²(x/l).
    PoschlTeller { nu: f64, l: f64 },
    /// 𝒱(x) = Ω x² / 2.
    Harmonic { omega: f64 },
    /// 𝒱 = 0, the free chain.
    Flat,
    /// One value per lattice site, n = −M..M.
    Tabulated { samples: Vec<f64> },
}

/// A well of given shape whose minimum sits at x_c(t) = center0 − v·t,
/// i.e. the lattice sees 𝒱(x + v·t − center0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub shape: WellShape,
    pub drift_v: f64,
    pub center0: f64,
}

impl PotentialSpec {
    pub fn poschl_teller(nu: f64, l: f64) -> Self {
        Self {
            shape: WellShape::PoschlTeller { nu, l },
            drift_v: 0.0,
            center0: 0.0,
        }
    }

    pub fn harmonic(omega: f64) -> Self {
        Self {
            shape: WellShape::Harmonic { omega },
            drift_v: 0.0,
            center0: 0.0,
        }
    }

    pub fn tabulated(samples: Vec<f64>) -> Self {
        Self {
            shape: WellShape::Tabulated { samples },
            drift_v: 0.0,
            center0: 0.0,
        }
    }

    pub fn free() -> Self {
        Self {
            shape: WellShape::Flat,
            drift_v: 0.0,
            center0: 0.0,
        }
    }

    pub fn with_drift(mut self, v: f64) -> Self {
        self.drift_v = v;
        self
    }

    pub fn centered_at(mut self, center0: f64) -> Self {
        self.center0 = center0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(DwmError::InvalidParameter(msg));
        if !self.drift_v.is_finite() || !self.center0.is_finite() {
            return bad("drift velocity and center must be finite".into());
        }
        match &self.shape {
            WellShape::PoschlTeller { nu, l } => {
                if !(*nu > 0.0 && nu.is_finite()) || !(*l > 0.0 && l.is_finite()) {
                    return bad(format!(
                        "Pöschl–Teller needs ν > 0 and l > 0, got ν={nu}, l={l}"
                    ));
                }
            }
            WellShape::Harmonic { omega } => {
                if !(*omega > 0.0 && omega.is_finite()) {
                    return bad(format!("harmonic well needs Ω > 0, got {omega}"));
                }
            }
            WellShape::Flat => {}
            WellShape::Tabulated { samples } => {
                if samples.iter().any(|v| !v.is_finite()) {
                    return bad("tabulated potential contains non-finite samples".into());
                }
            }
        }
        Ok(())
    }

    pub fn well_center(&self, t: f64) -> f64 {
        self.center0 - self.drift_v * t
    }

    /// Analytic profile value 𝒱(ξ) for a displacement ξ from the well center.
    /// `None` for tabulated wells.
    pub fn profile(&self, xi: f64) -> Option<f64> {
        match &self.shape {
            WellShape::PoschlTeller { nu, l } => {
                let sech = 1.0 / (xi / l).cosh();
                Some(-nu * (nu + 1.0) / (l * l) * sech * sech)
            }
            WellShape::Harmonic { omega } => Some(0.5 * omega * xi * xi),
            WellShape::Flat => Some(0.0),
            WellShape::Tabulated { .. } => None,
        }
    }

    /// Fill `out` with the on-site potential at time `t`.
    pub fn fill(&self, model: &LatticeModel, t: f64, out: &mut [f64]) -> Result<()> {
        let n = model.sites();
        if out.len() != n {
            return Err(DwmError::LengthMismatch {
                expected: n,
                got: out.len(),
            });
        }
        if let WellShape::Tabulated { samples } = &self.shape {
            if samples.len() != n {
                return Err(DwmError::LengthMismatch {
                    expected: n,
                    got: samples.len(),
                });
            }
            if self.drift_v * t != 0.0 {
                return Err(DwmError::TabulatedDrift(self.drift_v * t));
            }
            out.copy_from_slice(samples);
            return Ok(());
        }
        let xc = self.well_center(t);
        for (i, slot) in out.iter_mut().enumerate() {
            // unwrap: analytic shapes always have a profile
            *slot = self.profile(model.position(i) - xc).unwrap();
        }
        Ok(())
    }

    /// Upper bound of |𝒱| over the lattice for t in [0, t_max]. Exact for
    /// the shapes provided: |𝒱| at a site is convex in t for the harmonic
    /// well and bounded by the depth for Pöschl–Teller.
    pub fn max_abs_over(&self, model: &LatticeModel, t_max: f64) -> Result<f64> {
        match &self.shape {
            WellShape::PoschlTeller { nu, l } => Ok(nu * (nu + 1.0) / (l * l)),
            WellShape::Flat => Ok(0.0),
            _ => {
                let mut buf = vec![0.0; model.sites()];
                let mut max: f64 = 0.0;
                for t in [0.0, t_max] {
                    self.fill(model, t, &mut buf)?;
                    max = buf.iter().fold(max, |m, v| m.max(v.abs()));
                }
                Ok(max)
            }
        }
    }
}

/// 𝒱(n + v·t − center0) for n = −M..M.
pub fn sample_potential(spec: &PotentialSpec, model: &LatticeModel, t: f64) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut out = vec![0.0; model.sites()];
    spec.fill(model, t, &mut out)?;
    Ok(out)
}
