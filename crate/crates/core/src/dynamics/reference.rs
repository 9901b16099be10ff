//! Rest-frame mode profiles carried along with the drifting well.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boost::BoostParameters;
use crate::error::{DwmError, Result};
use crate::lattice::LatticeModel;
use crate::state::WaveState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    /// exp(−ξ²/(2σ²)).
    Gaussian { sigma2: f64 },
    /// Real samples at offsets ξ = −K..K from the well center; cubic
    /// (Catmull–Rom) interpolation in between, zero outside.
    Sampled { values: Vec<f64> },
}

impl Profile {
    pub fn sampled_from(state: &WaveState) -> Self {
        Self::Sampled {
            values: state.amplitudes().iter().map(|c| c.re).collect(),
        }
    }

    pub fn eval(&self, xi: f64) -> f64 {
        match self {
            Profile::Gaussian { sigma2 } => (-xi * xi / (2.0 * sigma2)).exp(),
            Profile::Sampled { values } => {
                let k = (values.len() / 2) as f64;
                let u = xi + k;
                let at = |j: i64| {
                    if j < 0 || j as usize >= values.len() {
                        0.0
                    } else {
                        values[j as usize]
                    }
                };
                let j = u.floor();
                let f = u - j;
                let j = j as i64;
                let (p0, p1, p2, p3) = (at(j - 1), at(j), at(j + 1), at(j + 2));
                p1 + 0.5
                    * f
                    * (p2 - p0
                        + f * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3
                            + f * (3.0 * (p1 - p2) + p3 - p0)))
            }
        }
    }
}

/// The boosted rest-frame mode φ(n − x_c(t))·exp(−iq(n − x_c(t))) following
/// the well center x_c(t) = center0 − v·t.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComovingReference {
    pub profile: Profile,
    pub qa: f64,
    pub center0: f64,
    pub velocity: f64,
}

impl ComovingReference {
    pub fn new(profile: Profile, bp: &BoostParameters, center0: f64) -> Self {
        Self {
            profile,
            qa: bp.qa,
            center0,
            velocity: bp.v,
        }
    }

    pub fn center(&self, t: f64) -> f64 {
        self.center0 - self.velocity * t
    }

    /// |⟨ref(t)|c⟩|² / (‖ref‖² ‖c‖²).
    pub fn overlap(&self, amplitudes: &[Complex64], t: f64) -> f64 {
        let m = (amplitudes.len() / 2) as f64;
        let xc = self.center(t);
        let (mut dot, mut rr, mut cc) = (Complex64::new(0.0, 0.0), 0.0, 0.0);
        for (i, a) in amplitudes.iter().enumerate() {
            let xi = i as f64 - m - xc;
            let r = self.profile.eval(xi);
            cc += a.norm_sqr();
            if r != 0.0 {
                // conj(r·e^{−iqξ}) = r·e^{iqξ}
                dot += r * Complex64::from_polar(1.0, self.qa * xi) * a;
                rr += r * r;
            }
        }
        if rr == 0.0 || cc == 0.0 {
            return 0.0;
        }
        dot.norm_sqr() / (rr * cc)
    }
}

/// Discrete Gaussian ground state of the co-moving oscillator
/// −(1/2m*)∂² + Ωx²/2 centered at `center`: σ² = 1/√(m*Ω) = √(2/(rΩ)) with
/// r = m*/m and m = 1/2.
pub fn harmonic_ground_state(
    model: &LatticeModel,
    omega: f64,
    mass_ratio: f64,
    center: f64,
) -> Result<WaveState> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(DwmError::InvalidParameter(format!(
            "Ω must be positive, got {omega}"
        )));
    }
    if !(mass_ratio >= 1.0 && mass_ratio.is_finite()) {
        return Err(DwmError::InvalidParameter(format!(
            "mass ratio must be finite and ≥ 1, got {mass_ratio}"
        )));
    }
    let sigma2 = harmonic_width_sq(omega, mass_ratio);
    if sigma2 < 1.0 {
        return Err(DwmError::UnresolvedState(sigma2.sqrt()));
    }
    let profile = Profile::Gaussian { sigma2 };
    WaveState::from_fn(model.half_width(), 0.0, |n| {
        Complex64::new(profile.eval(n as f64 - center), 0.0)
    })
    .normalized()
}

pub fn harmonic_width_sq(omega: f64, mass_ratio: f64) -> f64 {
    (2.0 / (mass_ratio * omega)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boost::{boosted_initial_state, solve_boost};
    use crate::state::parity_score;
    use approx::assert_relative_eq;

    #[test]
    fn ground_state_width() {
        assert_relative_eq!(harmonic_width_sq(0.02, 1.0), 10.0, epsilon = 1e-12);
        // σ² ∝ 1/√(m*)
        assert_relative_eq!(
            harmonic_width_sq(0.02, 4.0),
            0.5 * harmonic_width_sq(0.02, 1.0),
            epsilon = 1e-12
        );
        let model = LatticeModel::open(100).unwrap();
        let g = harmonic_ground_state(&model, 0.02, 1.0, 0.0).unwrap();
        // second moment of the discrete density ≈ σ²/2
        let var: f64 = g
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, c)| (g.site(i) as f64).powi(2) * c.norm_sqr())
            .sum();
        assert_relative_eq!(var, 5.0, epsilon = 1e-9);
    }

    #[test]
    fn ground_state_is_even_about_its_center() {
        let model = LatticeModel::open(200).unwrap();
        for (omega, r, center) in [(0.02, 1.0, 0.0), (0.02, 1.9, 70.0), (0.05, 1.2, -10.5)] {
            let g = harmonic_ground_state(&model, omega, r, center).unwrap();
            assert_relative_eq!(parity_score(&g, center).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn narrow_states_are_rejected() {
        let model = LatticeModel::open(20).unwrap();
        assert!(matches!(
            harmonic_ground_state(&model, 3.0, 1.0, 0.0),
            Err(DwmError::UnresolvedState(_))
        ));
        assert!(harmonic_ground_state(&model, -1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn sampled_profile_interpolates_smoothly() {
        let values: Vec<f64> = (-20..=20).map(|n| (-(n * n) as f64 / 50.0).exp()).collect();
        let p = Profile::Sampled { values };
        assert_eq!(p.eval(3.0), (-9.0f64 / 50.0).exp());
        assert!((p.eval(2.5) - (-6.25f64 / 50.0).exp()).abs() < 1e-4);
        assert_eq!(p.eval(40.0), 0.0);
    }

    #[test]
    fn overlap_with_itself_is_one() {
        let model = LatticeModel::open(60).unwrap();
        let bp = solve_boost(1.5).unwrap();
        let g = harmonic_ground_state(&model, 0.02, bp.mass_ratio, 10.0).unwrap();
        let b = boosted_initial_state(&g, &bp);
        let r = ComovingReference::new(
            Profile::Gaussian {
                sigma2: harmonic_width_sq(0.02, bp.mass_ratio),
            },
            &bp,
            10.0,
        );
        assert_relative_eq!(r.overlap(b.amplitudes(), 0.0), 1.0, epsilon = 1e-12);
        // the reference has moved by 1.5 sites at t = 1
        assert!(r.overlap(b.amplitudes(), 1.0) < 0.99);
        let unboosted = r.overlap(g.amplitudes(), 0.0);
        assert!(unboosted < 0.5);
    }
}
