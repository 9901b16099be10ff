//! Closed-form quantities of the Galilean boost on the lattice.
//!
//! Moving into the rest frame of a well drifting as 𝒱(x + v·t) and removing
//! the drift term with the gauge factor exp(−iqx − iγt) requires
//! sin(qa) = mva/ħ, which in lattice units (m = 1/2) reads sin(qa) = v/2.
//! The price is a heavier particle, m*/m = 1/cos(qa).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DwmError, Result};
use crate::state::WaveState;

/// Drift speed above which sin(qa) = v/2 has no real solution.
pub const CRITICAL_VELOCITY: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoostParameters {
    pub v: f64,
    /// Boost phase q·a on the principal branch [−π/2, π/2].
    pub qa: f64,
    /// Gauge frequency γ (diagnostic; the amplitude equations carry no
    /// global phase).
    pub gamma: f64,
    /// m*/m ≥ 1.
    pub mass_ratio: f64,
}

impl BoostParameters {
    /// sin(qa) = v/2, returned without the round trip through `qa`.
    pub fn sin_qa(&self) -> f64 {
        self.v / 2.0
    }
}

pub fn solve_boost(v: f64) -> Result<BoostParameters> {
    if !v.is_finite() || v.abs() > CRITICAL_VELOCITY {
        return Err(DwmError::BeyondCriticalVelocity(v));
    }
    let s = v / 2.0;
    let qa = s.asin();
    let cos_qa = (1.0 - s * s).sqrt();
    Ok(BoostParameters {
        v,
        qa,
        gamma: -v * qa + 2.0 * (1.0 - cos_qa),
        // v = ±2 leaves the mass unbounded
        mass_ratio: 1.0 / cos_qa,
    })
}

/// Pöschl–Teller strength seen in the moving frame: the positive root of
/// ν*(ν*+1) = (m*/m)·ν(ν+1).
pub fn effective_depth(nu: f64, mass_ratio: f64) -> f64 {
    let c = mass_ratio * nu * (nu + 1.0);
    // (√(1+4c) − 1)/2 written without cancellation for small c
    2.0 * c / (1.0 + (1.0 + 4.0 * c).sqrt())
}

/// Plane-wave dispersion in the moving frame,
/// E(k) = 4·sin((k+2q)/2)·sin(k/2) − v·k.
pub fn dispersion(k: f64, bp: &BoostParameters) -> f64 {
    4.0 * (0.5 * (k + 2.0 * bp.qa)).sin() * (0.5 * k).sin() - bp.v * k
}

/// Momentum-space potential W(k) = 2(1 − cos k) − v·k.
pub fn momentum_potential(k: f64, v: f64) -> f64 {
    2.0 * (1.0 - k.cos()) - v * k
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremumKind {
    Min,
    Max,
    /// W′ = W″ = 0, reached only at |v| = 2.
    Inflection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub k: f64,
    pub w: f64,
    pub kind: ExtremumKind,
}

const EXTREMA_TOL: f64 = 1e-12;
const EXTREMA_GRID: usize = 4096;

/// Stationary points of W on k ∈ [−2π, 2π], sorted by k.
pub fn momentum_potential_extrema(v: f64) -> Vec<Extremum> {
    if !v.is_finite() || v.abs() > CRITICAL_VELOCITY {
        return Vec::new();
    }
    let dw = |k: f64| 2.0 * k.sin() - v;
    let d2w = |k: f64| 2.0 * k.cos();
    let lo = -2.0 * PI;
    let h = 4.0 * PI / EXTREMA_GRID as f64;

    let mut out = Vec::new();
    let mut push = |k: f64| {
        let curvature = d2w(k);
        let kind = if curvature.abs() <= 1e-9 {
            ExtremumKind::Inflection
        } else if curvature > 0.0 {
            ExtremumKind::Min
        } else {
            ExtremumKind::Max
        };
        out.push(Extremum {
            k,
            w: momentum_potential(k, v),
            kind,
        });
    };

    let grid = |i: usize| lo + i as f64 * h;
    let on_grid: Vec<bool> = (0..=EXTREMA_GRID)
        .map(|i| dw(grid(i)).abs() <= EXTREMA_TOL)
        .collect();
    for (i, _) in on_grid.iter().enumerate().filter(|(_, root)| **root) {
        push(grid(i));
    }
    for i in 0..EXTREMA_GRID {
        let (a, b) = (grid(i), grid(i + 1));
        if !on_grid[i] && !on_grid[i + 1] && dw(a) * dw(b) < 0.0 {
            push(bisect(dw, a, b));
        }
    }

    // Tangential zeros of W′ do not change sign; look for them among the
    // zeros of W″.
    for i in 0..EXTREMA_GRID {
        let (a, b) = (grid(i), grid(i + 1));
        if d2w(a) * d2w(b) < 0.0 {
            let k = bisect(d2w, a, b);
            if dw(k).abs() <= EXTREMA_TOL {
                push(k);
            }
        }
    }

    out.sort_by(|a, b| a.k.total_cmp(&b.k));
    out.dedup_by(|a, b| (a.k - b.k).abs() < 1e-9);
    out
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    while b - a > EXTREMA_TOL {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

/// Imprint the co-moving gauge factor exp(−iqna) on a rest-frame profile.
/// With the well drifting toward −n this launches the packet at the well's
/// group velocity 2·sin(qa) = v.
pub fn boosted_initial_state(phi: &WaveState, bp: &BoostParameters) -> WaveState {
    let q = bp.qa;
    let amps = phi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, c)| c * Complex64::from_polar(1.0, -q * phi.site(i) as f64))
        .collect();
    // unwrap: same length as a valid state
    WaveState::new(amps, phi.t).unwrap()
}

/// Velocity at which the moving well's effective depth ν* first reaches
/// `target` (e.g. the next integer), or `None` if that would need |v| > 2.
pub fn velocity_for_depth(nu: f64, target: f64) -> Option<f64> {
    if target <= nu {
        return Some(0.0);
    }
    let ratio = target * (target + 1.0) / (nu * (nu + 1.0));
    let s2 = 1.0 - 1.0 / (ratio * ratio);
    let v = 2.0 * s2.sqrt();
    (v <= CRITICAL_VELOCITY).then_some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::participation_ratio;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn rest_frame_is_trivial() {
        let bp = solve_boost(0.0).unwrap();
        assert_eq!((bp.qa, bp.gamma, bp.mass_ratio), (0.0, 0.0, 1.0));
    }

    #[test]
    fn fig4_drift_constants() {
        let bp = solve_boost(1.5).unwrap();
        assert_eq!(bp.sin_qa(), 0.75);
        assert_relative_eq!(
            bp.mass_ratio,
            1.0 / (1.0f64 - 0.5625).sqrt(),
            epsilon = 1e-15
        );
        assert!((bp.mass_ratio - 1.5119).abs() < 1e-3);
        assert!((bp.qa.abs()) <= FRAC_PI_2);
    }

    #[test]
    fn beyond_critical_velocity() {
        assert!(matches!(
            solve_boost(2.2),
            Err(DwmError::BeyondCriticalVelocity(_))
        ));
        assert!(solve_boost(-2.0000001).is_err());
        assert!(solve_boost(2.0).is_ok());
    }

    #[test]
    fn effective_depth_examples() {
        assert_relative_eq!(effective_depth(0.97, 1.0), 0.97, epsilon = 1e-14);
        assert!((effective_depth(0.97, 1.5119) - 1.27).abs() < 0.01);
        assert_relative_eq!(effective_depth(1.0, 3.0), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn dispersion_examples() {
        let bp = solve_boost(1.2).unwrap();
        assert_eq!(dispersion(0.0, &bp), 0.0);
        assert_relative_eq!(
            dispersion(-2.0 * bp.qa, &bp),
            2.0 * bp.v * bp.qa,
            epsilon = 1e-14
        );
        let rest = solve_boost(0.0).unwrap();
        for i in -100..=100 {
            let k = i as f64 * 0.1;
            assert_relative_eq!(dispersion(k, &rest), 2.0 * (1.0 - k.cos()), epsilon = 1e-14);
        }
    }

    #[test]
    fn momentum_potential_examples() {
        assert_eq!(momentum_potential(0.0, 0.7), 0.0);
        for i in 0..100 {
            let w = momentum_potential(i as f64 * 0.37, 0.0);
            assert!((0.0..=4.0).contains(&w));
        }
        assert_relative_eq!(
            momentum_potential(2.0 * PI, 0.3),
            -2.0 * PI * 0.3,
            epsilon = 1e-14
        );
    }

    #[test]
    fn extrema_at_rest() {
        let ex = momentum_potential_extrema(0.0);
        let ks: Vec<f64> = ex.iter().map(|e| e.k / PI).collect();
        assert_eq!(ex.len(), 5, "{ks:?}");
        for (e, (k, kind)) in ex.iter().zip([
            (-2.0, ExtremumKind::Min),
            (-1.0, ExtremumKind::Max),
            (0.0, ExtremumKind::Min),
            (1.0, ExtremumKind::Max),
            (2.0, ExtremumKind::Min),
        ]) {
            assert!((e.k - k * PI).abs() < 1e-11);
            assert_eq!(e.kind, kind);
            let expected_w = if kind == ExtremumKind::Min { 0.0 } else { 4.0 };
            assert!((e.w - expected_w).abs() < 1e-11);
        }
    }

    #[test]
    fn extrema_at_critical_velocity_are_degenerate() {
        let ex = momentum_potential_extrema(2.0);
        assert!(!ex.is_empty());
        assert!(ex.iter().all(|e| e.kind == ExtremumKind::Inflection));
        assert!(ex.iter().any(|e| (e.k - FRAC_PI_2).abs() < 1e-11));
        assert!(momentum_potential_extrema(2.0 + 1e-9).is_empty());
    }

    #[test]
    fn extrema_small_velocity_matches_bisection_oracle() {
        // oracle: plain bisection of sin(k) = 0.2 on [0, π/2]
        let (mut a, mut b) = (0.0f64, FRAC_PI_2);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if 2.0 * m.sin() - 0.4 > 0.0 {
                b = m
            } else {
                a = m
            }
        }
        let ex = momentum_potential_extrema(0.4);
        let min = ex
            .iter()
            .find(|e| e.kind == ExtremumKind::Min && e.k.abs() < 1.0)
            .unwrap();
        assert!((min.k - a).abs() < 1e-11);
        assert!((min.k - 0.2014).abs() < 1e-4);
    }

    #[test]
    fn boosted_state_is_a_pure_phase() {
        let phi = WaveState::from_fn(20, 0.0, |n| {
            Complex64::new((-(n * n) as f64 / 30.0).exp(), 0.0)
        })
        .normalized()
        .unwrap();
        let same = boosted_initial_state(&phi, &solve_boost(0.0).unwrap());
        assert_eq!(same, phi);
        let bp = solve_boost(1.5).unwrap();
        let b = boosted_initial_state(&phi, &bp);
        for (x, y) in b.amplitudes().iter().zip(phi.amplitudes()) {
            assert!((x.norm() - y.norm()).abs() < 1e-15);
        }
        assert_relative_eq!(
            participation_ratio(&b).unwrap(),
            participation_ratio(&phi).unwrap(),
            epsilon = 1e-12
        );
        // phase advances by −qa per site
        let ratio =
            b.amplitudes()[21] / b.amplitudes()[20] * phi.amplitudes()[20] / phi.amplitudes()[21];
        assert_relative_eq!(ratio.arg(), -bp.qa, epsilon = 1e-14);
    }

    #[test]
    fn transition_velocity_for_nu_097() {
        // oracle: bisection on v of ν*(v) − 1
        let f = |v: f64| effective_depth(0.97, solve_boost(v).unwrap().mass_ratio) - 1.0;
        let (mut a, mut b) = (0.0, 2.0);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if f(m) > 0.0 {
                b = m
            } else {
                a = m
            }
        }
        let v = velocity_for_depth(0.97, 1.0).unwrap();
        assert!((v - a).abs() < 1e-9);
        assert!((v - 0.590).abs() < 1e-3, "{v}");
        assert!((solve_boost(v).unwrap().sin_qa() - 0.2951).abs() < 1e-3);
    }

    proptest! {
        #[test]
        fn mass_ratio_times_cos_is_one(v in -2.0f64..=2.0) {
            let bp = solve_boost(v).unwrap();
            if v.abs() < 2.0 {
                prop_assert!((bp.mass_ratio * bp.qa.cos() - 1.0).abs() < 1e-12);
            }
            prop_assert!(bp.mass_ratio >= 1.0);
            prop_assert!((bp.qa.sin() - v / 2.0).abs() < 1e-15);
            prop_assert!((bp.gamma - (-v * bp.qa + 2.0 * (1.0 - bp.qa.cos()))).abs() < 1e-14);
        }

        #[test]
        fn boost_is_odd(v in 0.0f64..=2.0) {
            let p = solve_boost(v).unwrap();
            let n = solve_boost(-v).unwrap();
            prop_assert_eq!(p.qa, -n.qa);
            prop_assert_eq!(p.mass_ratio, n.mass_ratio);
        }

        #[test]
        fn effective_depth_is_monotone(nu in 0.01f64..5.0, r in 1.0f64..4.0, dnu in 0.0f64..1.0, dr in 0.0f64..1.0) {
            let base = effective_depth(nu, r);
            prop_assert!(base >= nu * (1.0 - 1e-14));
            prop_assert!(effective_depth(nu + dnu, r) >= base);
            prop_assert!(effective_depth(nu, r + dr) >= base);
            prop_assert!((base * (base + 1.0) - r * nu * (nu + 1.0)).abs() < 1e-10 * r * nu * (nu + 1.0));
        }

        #[test]
        fn one_min_and_max_per_period(v in 0.01f64..1.99) {
            let ex = momentum_potential_extrema(v);
            let in_period: Vec<_> = ex.iter().filter(|e| e.k >= 0.0 && e.k < 2.0 * PI).collect();
            prop_assert_eq!(in_period.iter().filter(|e| e.kind == ExtremumKind::Min).count(), 1);
            prop_assert_eq!(in_period.iter().filter(|e| e.kind == ExtremumKind::Max).count(), 1);
            for e in &ex {
                prop_assert!((2.0 * e.k.sin() - v).abs() < 1e-11);
            }
        }

        #[test]
        fn well_gap_shrinks_toward_critical(v in 0.05f64..1.9, dv in 0.01f64..0.09) {
            let gap = |v: f64| {
                let ex = momentum_potential_extrema(v);
                let min = ex.iter().find(|e| e.kind == ExtremumKind::Min && e.k >= 0.0).unwrap();
                let max = ex.iter().find(|e| e.kind == ExtremumKind::Max && e.k > min.k).unwrap();
                max.w - min.w
            };
            prop_assert!(gap(v + dv) < gap(v));
        }
    }
}
