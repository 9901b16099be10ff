//! Complex amplitude fields on the lattice and the scalar observables
//! computed from them.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DwmError, Result};
use crate::io::fmt17;

/// Amplitudes c_n for n = −M..M at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveState {
    amplitudes: Vec<Complex64>,
    pub t: f64,
}

impl WaveState {
    pub fn new(amplitudes: Vec<Complex64>, t: f64) -> Result<Self> {
        let n = amplitudes.len();
        if n < 3 || n.is_multiple_of(2) {
            return Err(DwmError::InvalidParameter(format!(
                "a wave state needs an odd number (≥ 3) of sites, got {n}"
            )));
        }
        Ok(Self { amplitudes, t })
    }

    pub fn from_real(values: &[f64], t: f64) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect(), t)
    }

    /// Build a state from a function of the site label n.
    pub fn from_fn(half_width: usize, t: f64, f: impl Fn(i64) -> Complex64) -> Self {
        let m = half_width as i64;
        Self {
            amplitudes: (-m..=m).map(f).collect(),
            t,
        }
    }

    pub fn delta(half_width: usize, site: i64) -> Self {
        Self::from_fn(half_width, 0.0, |n| {
            if n == site {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn half_width(&self) -> usize {
        self.amplitudes.len() / 2
    }

    pub fn site(&self, index: usize) -> i64 {
        index as i64 - self.half_width() as i64
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n2 = norm_sq(&self);
        if n2 == 0.0 {
            return Err(DwmError::ZeroState);
        }
        let s = 1.0 / n2.sqrt();
        self.amplitudes.iter_mut().for_each(|c| *c *= s);
        Ok(self)
    }

    /// Mirror image about `center`: c'_n = c_{2·center − n}, zero where the
    /// image falls off the lattice.
    pub fn reflect(&self, center: f64) -> Result<Self> {
        let twice = site_compatible(center)?;
        let m = self.half_width() as i64;
        Ok(Self::from_fn(self.half_width(), self.t, |n| {
            let image = twice - n;
            if (-m..=m).contains(&image) {
                self.amplitudes[(image + m) as usize]
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// CSV dump: a `# t=<value>` line followed by `n,Re c_n,Im c_n` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.len() * 56);
        let _ = writeln!(out, "# t={}", fmt17(self.t));
        for (i, c) in self.amplitudes.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", self.site(i), fmt17(c.re), fmt17(c.im));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut t = 0.0;
        let mut rows: Vec<(i64, Complex64)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(v) = rest.trim().strip_prefix("t=") {
                    t = parse_f64(v, lineno)?;
                }
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(DwmError::Config(format!(
                    "line {}: expected 3 columns, got {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let n: i64 = fields[0].parse().map_err(|_| {
                DwmError::Config(format!(
                    "line {}: bad site index {:?}",
                    lineno + 1,
                    fields[0]
                ))
            })?;
            rows.push((
                n,
                Complex64::new(parse_f64(fields[1], lineno)?, parse_f64(fields[2], lineno)?),
            ));
        }
        let state = Self::new(rows.iter().map(|r| r.1).collect(), t)?;
        let m = state.half_width() as i64;
        if rows.iter().enumerate().any(|(i, r)| r.0 != i as i64 - m) {
            return Err(DwmError::Config(
                "site labels must run consecutively from −M to M".into(),
            ));
        }
        Ok(state)
    }
}

fn parse_f64(s: &str, lineno: usize) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| DwmError::Config(format!("line {}: bad number {:?}", lineno + 1, s)))
}

/// Returns 2·center as an integer when reflection about `center` maps sites
/// onto sites.
fn site_compatible(center: f64) -> Result<i64> {
    let twice = 2.0 * center;
    if !twice.is_finite() || (twice - twice.round()).abs() > 1e-9 {
        return Err(DwmError::IncompatibleCenter(center));
    }
    Ok(twice.round() as i64)
}

pub fn norm_sq(state: &WaveState) -> f64 {
    state.amplitudes.iter().map(|c| c.norm_sqr()).sum()
}

/// ⟨a|b⟩, conjugate-linear in `a`.
pub fn inner_product(a: &WaveState, b: &WaveState) -> Result<Complex64> {
    if a.len() != b.len() {
        return Err(DwmError::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// R = (Σ|c|²)² / Σ|c|⁴; 1 for a single site, 2M+1 for a uniform state.
pub fn participation_ratio(state: &WaveState) -> Result<f64> {
    participation_ratio_of(state.amplitudes.iter().map(|c| c.norm_sqr()))
}

pub(crate) fn participation_ratio_of(probs: impl Iterator<Item = f64>) -> Result<f64> {
    let (s2, s4) = probs.fold((0.0, 0.0), |(s2, s4), p| (s2 + p, s4 + p * p));
    if s4 == 0.0 {
        return Err(DwmError::ZeroState);
    }
    Ok(s2 * s2 / s4)
}

/// Re⟨c|P c⟩/⟨c|c⟩ with P the reflection about `center`: +1 for even, −1
/// for odd states.
pub fn parity_score(state: &WaveState, center: f64) -> Result<f64> {
    let n2 = norm_sq(state);
    if n2 == 0.0 {
        return Err(DwmError::ZeroState);
    }
    let mirrored = state.reflect(center)?;
    Ok(inner_product(state, &mirrored)?.re / n2)
}

/// Fraction of the norm on sites with |n − center| ≤ half_window. A zero
/// state yields 0.
pub fn localized_fraction(state: &WaveState, center: f64, half_window: f64) -> f64 {
    let n2 = norm_sq(state);
    if n2 == 0.0 {
        return 0.0;
    }
    let reach = half_window + 1e-9;
    let inside: f64 = state
        .amplitudes
        .iter()
        .enumerate()
        .filter(|(i, _)| (state.site(*i) as f64 - center).abs() <= reach)
        .map(|(_, c)| c.norm_sqr())
        .sum();
    (inside / n2).min(1.0)
}

/// ⟨n⟩ = Σ n|c_n|² / Σ|c_n|².
pub fn center_of_mass(state: &WaveState) -> f64 {
    let n2 = norm_sq(state);
    if n2 == 0.0 {
        return 0.0;
    }
    state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(i, c)| state.site(i) as f64 * c.norm_sqr())
        .sum::<f64>()
        / n2
}
