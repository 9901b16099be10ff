//! Static-frame spectra: Hamiltonian assembly, eigendecomposition,
//! bound-state classification and the continuum Pöschl–Teller levels.

mod tridiag;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::boost::{effective_depth, solve_boost};
use crate::error::{DwmError, Result};
use crate::io::fmt17;
use crate::lattice::{sample_potential, LatticeModel, PotentialSpec, WellShape};
use crate::state::{parity_score, participation_ratio_of, WaveState};

pub use tridiag::{sturm_count, tridiagonal_eigen, MAX_SWEEPS};

/// Lower edge of the free tight-binding band, −2κ.
pub const BAND_BOTTOM: f64 = -2.0;

/// H = −(δ_{n,m+1} + δ_{n,m−1}) + diag_n δ_{n,m}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalHamiltonian {
    pub diag: Vec<f64>,
    /// Constant hopping element, −κ.
    pub offdiag: f64,
    /// Reflection center for parity scores, when the well is symmetric about
    /// a site or bond.
    pub parity_center: Option<f64>,
}

impl TridiagonalHamiltonian {
    pub fn from_diagonal(diag: Vec<f64>) -> Self {
        Self {
            diag,
            offdiag: -1.0,
            parity_center: None,
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn off_diagonal(&self) -> Vec<f64> {
        vec![self.offdiag; self.diag.len().saturating_sub(1)]
    }

    /// y = H x.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.offdiag * x[i - 1];
                }
                if i + 1 < n {
                    y += self.offdiag * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Scale used by the residual budget: ‖diag‖_∞ + 2|offdiag|.
    pub fn scale(&self) -> f64 {
        self.diag.iter().fold(0.0f64, |m, d| m.max(d.abs())) + 2.0 * self.offdiag.abs()
    }
}

pub fn assemble_hamiltonian(
    model: &LatticeModel,
    spec: &PotentialSpec,
    t: f64,
) -> Result<TridiagonalHamiltonian> {
    let diag = sample_potential(spec, model, t)?;
    let center = spec.well_center(t);
    let symmetric = !matches!(spec.shape, WellShape::Tabulated { .. });
    let parity_center =
        (symmetric && (2.0 * center - (2.0 * center).round()).abs() < 1e-9).then_some(center);
    Ok(TridiagonalHamiltonian {
        diag,
        offdiag: -1.0,
        parity_center,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// Ascending, in κ.
    pub eigenvalues: Vec<f64>,
    /// Real orthonormal eigenvectors over n = −M..M.
    pub eigenvectors: Vec<Vec<f64>>,
    pub participation: Vec<f64>,
    /// Energy criterion: ℰ_j below −2κ − ε_band.
    pub bound: Vec<bool>,
    /// Participation criterion: R_j < 0.1·(2M+1).
    pub localized: Vec<bool>,
    pub parity: Vec<Option<f64>>,
}

impl SpectrumReport {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn bound_count(&self) -> usize {
        self.bound.iter().filter(|b| **b).count()
    }

    /// Levels where the energy and participation criteria disagree.
    pub fn disagreements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| self.bound[j] != self.localized[j])
            .collect()
    }

    pub fn state(&self, j: usize) -> WaveState {
        // unwrap: eigenvectors of a lattice Hamiltonian have odd length
        WaveState::from_real(&self.eigenvectors[j], 0.0).unwrap()
    }

    /// `index,eigenvalue,R,bound,parity` rows; parity is empty when
    /// undefined.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,eigenvalue,R,bound,parity\n");
        for j in 0..self.len() {
            let parity = self.parity[j].map(fmt17).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                j,
                fmt17(self.eigenvalues[j]),
                fmt17(self.participation[j]),
                u8::from(self.bound[j]),
                parity
            );
        }
        out
    }
}

/// Full spectrum with participation ratios and, when the Hamiltonian
/// carries a reflection center, parity scores. `bound` is left unset.
pub fn eigendecompose(h: &TridiagonalHamiltonian) -> Result<SpectrumReport> {
    let (eigenvalues, eigenvectors) = tridiagonal_eigen(&h.diag, &h.off_diagonal())?;
    let participation = eigenvectors
        .iter()
        .map(|v| participation_ratio_of(v.iter().map(|x| x * x)))
        .collect::<Result<Vec<_>>>()?;
    let parity = eigenvectors
        .iter()
        .map(|v| {
            let center = h.parity_center?;
            let state = WaveState::from_real(v, 0.0).ok()?;
            parity_score(&state, center).ok()
        })
        .collect();
    Ok(SpectrumReport {
        bound: vec![false; eigenvalues.len()],
        localized: vec![false; eigenvalues.len()],
        eigenvalues,
        eigenvectors,
        participation,
        parity,
    })
}

pub fn sturm_count_below(h: &TridiagonalHamiltonian, threshold: f64) -> usize {
    sturm_count(&h.diag, &h.off_diagonal(), threshold)
}

/// ε_band = 10/(2M+1)², the finite-size level spacing near the band edge.
pub fn band_tolerance(model: &LatticeModel) -> f64 {
    let n = model.sites() as f64;
    10.0 / (n * n)
}

/// Energy below which a level counts as bound: −2κ − ε_band.
pub fn bound_threshold(model: &LatticeModel) -> f64 {
    BAND_BOTTOM - band_tolerance(model)
}

/// Mark levels below −2κ − ε_band as bound and record the participation
/// criterion R < 0.1·(2M+1) next to it. A shallow level whose decay length
/// is a sizeable fraction of the lattice is bound by energy yet extended by
/// participation; see [`SpectrumReport::disagreements`].
pub fn classify_bound_states(
    mut report: SpectrumReport,
    model: &LatticeModel,
) -> Result<SpectrumReport> {
    classify_with_threshold(&mut report, model, bound_threshold(model))?;
    Ok(report)
}

/// As [`classify_bound_states`], but any disagreement between the two
/// criteria is an error.
pub fn classify_bound_states_strict(
    report: SpectrumReport,
    model: &LatticeModel,
) -> Result<SpectrumReport> {
    let report = classify_bound_states(report, model)?;
    if let Some(&j) = report.disagreements().first() {
        return Err(DwmError::ClassificationMismatch {
            index: j,
            by_energy: report.bound[j],
            by_participation: report.localized[j],
        });
    }
    Ok(report)
}

pub fn classify_with_threshold(
    report: &mut SpectrumReport,
    model: &LatticeModel,
    threshold: f64,
) -> Result<()> {
    if report.len() != model.sites() {
        return Err(DwmError::LengthMismatch {
            expected: model.sites(),
            got: report.len(),
        });
    }
    let r_max = 0.1 * model.sites() as f64;
    for j in 0..report.len() {
        report.bound[j] = report.eigenvalues[j] < threshold;
        report.localized[j] = report.participation[j] < r_max;
    }
    Ok(())
}

/// Continuum Pöschl–Teller levels on the lattice energy scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticLevels {
    /// −2κ − (ν − n)²/l², n = 0, 1, …, strictly bound levels only.
    pub energies: Vec<f64>,
    /// ν is an integer: a zero-binding threshold state exists and is not
    /// listed in `energies`.
    pub threshold_state: bool,
}

pub fn pt_analytic_levels(nu: f64, l: f64) -> AnalyticLevels {
    let top = nu.floor() as usize;
    let energies = (0..=top)
        .map(|n| nu - n as f64)
        .filter(|gap| *gap > 0.0)
        .map(|gap| BAND_BOTTOM - gap * gap / (l * l))
        .collect();
    AnalyticLevels {
        energies,
        threshold_state: nu.fract() == 0.0,
    }
}

/// 1 + ⌊ν*⌋ for the well drifting at `v`.
pub fn predicted_bound_count(nu: f64, v: f64) -> Result<usize> {
    let bp = solve_boost(v)?;
    Ok(1 + effective_depth(nu, bp.mass_ratio).floor() as usize)
}

/// Eigen-decompose and classify in one go, for Pöschl–Teller-type wells.
pub fn bound_spectrum(model: &LatticeModel, spec: &PotentialSpec) -> Result<SpectrumReport> {
    let h = assemble_hamiltonian(model, spec, 0.0)?;
    classify_bound_states(eigendecompose(&h)?, model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn free(sites: usize) -> TridiagonalHamiltonian {
        TridiagonalHamiltonian::from_diagonal(vec![0.0; sites])
    }

    #[test]
    fn assemble_small_chains() {
        let w2 = eigendecompose(&free(2)).unwrap().eigenvalues;
        assert_relative_eq!(w2[0], -1.0, epsilon = 1e-15);
        assert_relative_eq!(w2[1], 1.0, epsilon = 1e-15);
        let model = LatticeModel::open(1).unwrap();
        let h = assemble_hamiltonian(&model, &PotentialSpec::free(), 0.0).unwrap();
        let w3 = eigendecompose(&h).unwrap().eigenvalues;
        let s2 = 2f64.sqrt();
        for (w, e) in w3.iter().zip([-s2, 0.0, s2]) {
            assert!((w - e).abs() < 1e-14);
        }
        let big = LatticeModel::open(200).unwrap();
        let h = assemble_hamiltonian(&big, &PotentialSpec::free(), 0.0).unwrap();
        let w = eigendecompose(&h).unwrap().eigenvalues;
        assert!(w.iter().all(|e| *e > -2.0 && *e < 2.0));
    }

    #[test]
    fn constant_shift_moves_every_level() {
        let mut h = free(31);
        let base = eigendecompose(&h).unwrap();
        h.diag.iter_mut().for_each(|d| *d = 5.0);
        let shifted = eigendecompose(&h).unwrap();
        for j in 0..31 {
            assert!((shifted.eigenvalues[j] - base.eigenvalues[j] - 5.0).abs() < 1e-13);
            for (a, b) in shifted.eigenvectors[j].iter().zip(&base.eigenvectors[j]) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn free_chain_has_no_bound_states() {
        let model = LatticeModel::open(200).unwrap();
        let r = bound_spectrum(&model, &PotentialSpec::free()).unwrap();
        assert_eq!(r.bound_count(), 0);
        let h = assemble_hamiltonian(&model, &PotentialSpec::free(), 0.0).unwrap();
        assert_eq!(sturm_count_below(&h, -2.0), 0);
        assert_eq!(sturm_count_below(&h, 2.0), 401);
    }

    #[test]
    fn analytic_levels() {
        let one = pt_analytic_levels(0.97, 5.0);
        assert_eq!(one.energies.len(), 1);
        assert_relative_eq!(one.energies[0], -2.037636, epsilon = 1e-12);
        let two = pt_analytic_levels(1.27, 5.0);
        assert_eq!(two.energies.len(), 2);
        assert_relative_eq!(-2.0 - two.energies[0], 0.064516, epsilon = 1e-12);
        assert_relative_eq!(-2.0 - two.energies[1], 0.002916, epsilon = 1e-12);
        assert_eq!(pt_analytic_levels(0.5, 3.0).energies.len(), 1);
        assert_eq!(pt_analytic_levels(0.5, 11.0).energies.len(), 1);
        let integer = pt_analytic_levels(2.0, 5.0);
        assert_eq!(integer.energies.len(), 2);
        assert!(integer.threshold_state);
        assert!(!two.threshold_state);
    }

    #[test]
    fn predicted_counts() {
        assert_eq!(predicted_bound_count(0.97, 0.0).unwrap(), 1);
        assert_eq!(predicted_bound_count(0.97, 1.5).unwrap(), 2);
        assert_eq!(predicted_bound_count(2.5, 0.0).unwrap(), 3);
        assert!(matches!(
            predicted_bound_count(0.97, 2.5),
            Err(DwmError::BeyondCriticalVelocity(_))
        ));
    }

    #[test]
    fn csv_has_one_row_per_level() {
        let model = LatticeModel::open(3).unwrap();
        let h = assemble_hamiltonian(&model, &PotentialSpec::poschl_teller(1.0, 1.0), 0.0).unwrap();
        let csv = eigendecompose(&h).unwrap().to_csv();
        assert_eq!(csv.lines().count(), 8);
        assert!(csv.starts_with("index,eigenvalue,R,bound,parity\n0,"));
    }

    #[test]
    fn parity_is_skipped_for_off_site_centers() {
        let model = LatticeModel::open(20).unwrap();
        let spec = PotentialSpec::poschl_teller(1.0, 3.0).centered_at(0.3);
        let h = assemble_hamiltonian(&model, &spec, 0.0).unwrap();
        assert_eq!(h.parity_center, None);
        assert!(eigendecompose(&h)
            .unwrap()
            .parity
            .iter()
            .all(Option::is_none));
        let h = assemble_hamiltonian(&model, &spec.centered_at(0.5), 0.0).unwrap();
        assert_eq!(h.parity_center, Some(0.5));
    }

    #[test]
    fn shallow_level_is_bound_but_extended() {
        let model = LatticeModel::with_sites(401).unwrap();
        let spec = PotentialSpec::poschl_teller(1.27, 5.0);
        let report = bound_spectrum(&model, &spec).unwrap();
        assert_eq!(report.bound_count(), 2);
        assert_eq!(report.disagreements(), vec![1]);
        let h = assemble_hamiltonian(&model, &spec, 0.0).unwrap();
        let strict = classify_bound_states_strict(eigendecompose(&h).unwrap(), &model);
        assert!(matches!(
            strict,
            Err(DwmError::ClassificationMismatch {
                index: 1,
                by_energy: true,
                by_participation: false
            })
        ));
        let wide = LatticeModel::with_sites(801).unwrap();
        let h = assemble_hamiltonian(&wide, &spec, 0.0).unwrap();
        let report = classify_bound_states_strict(eigendecompose(&h).unwrap(), &wide).unwrap();
        assert_eq!(report.bound_count(), 2);
    }
}
