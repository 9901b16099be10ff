//! Exponential-decay fits of survival-type series.

use serde::{Deserialize, Serialize};

use crate::error::{DwmError, Result};

/// Lifetimes above this are reported as +∞.
pub const TAU_CAP: f64 = 1e9;
/// Fewest points accepted in a fit window.
pub const MIN_FIT_POINTS: usize = 20;
/// Allowed relative rise between consecutive points before a series counts
/// as non-monotone.
const MONOTONE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lifetime {
    /// τ in 1/κ; `f64::INFINITY` when the decay is slower than 1/TAU_CAP.
    pub tau: f64,
    /// Coefficient of determination of the log-linear fit.
    pub r_squared: f64,
    pub points: usize,
}

impl Lifetime {
    pub fn is_finite(&self) -> bool {
        self.tau.is_finite()
    }
}

/// Least-squares fit of ln(y) = a − t/τ over t ∈ [t1, t2].
pub fn fit_exponential_decay(
    times: &[f64],
    values: &[f64],
    window: (f64, f64),
) -> Result<Lifetime> {
    if times.len() != values.len() {
        return Err(DwmError::LengthMismatch {
            expected: times.len(),
            got: values.len(),
        });
    }
    let (t1, t2) = window;
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(t, _)| **t >= t1 && **t <= t2)
        .map(|(t, y)| (*t, *y))
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(DwmError::NoExponentialRegime(format!(
            "{} points in [{t1}, {t2}], need at least {MIN_FIT_POINTS}",
            pts.len()
        )));
    }
    if let Some((t, y)) = pts.iter().find(|(_, y)| !y.is_finite() || *y <= 0.0) {
        return Err(DwmError::NoExponentialRegime(format!(
            "non-positive value {y} at t = {t}"
        )));
    }

    let n = pts.len() as f64;
    let mean_t = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let (mut stt, mut sty, mut syy) = (0.0, 0.0, 0.0);
    for (t, y) in &pts {
        let dt = t - mean_t;
        let dy = y.ln() - mean_y;
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    if stt == 0.0 {
        return Err(DwmError::NoExponentialRegime(
            "fit window has zero time span".into(),
        ));
    }
    let slope = sty / stt;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sty * sty / (stt * syy)
    };

    if slope >= -1.0 / TAU_CAP {
        return Ok(Lifetime {
            tau: f64::INFINITY,
            r_squared,
            points: pts.len(),
        });
    }
    if let Some(w) = pts
        .windows(2)
        .find(|w| w[1].1 > w[0].1 * (1.0 + MONOTONE_SLACK))
    {
        return Err(DwmError::NoExponentialRegime(format!(
            "series rises from {} to {} between t = {} and t = {}",
            w[0].1, w[1].1, w[0].0, w[1].0
        )));
    }
    Ok(Lifetime {
        tau: -1.0 / slope,
        r_squared,
        points: pts.len(),
    })
}
