//! Symmetric tridiagonal eigensolver (implicit-shift QL with Wilkinson-type
//! shifts and eigenvector accumulation) and Sturm-sequence counting.

use crate::error::{DwmError, Result};

/// Sweeps allowed per eigenvalue before giving up.
pub const MAX_SWEEPS: usize = 60;

/// Eigenpairs of the symmetric tridiagonal matrix with diagonal `diag` and
/// sub/super-diagonal `off` (len n−1). Eigenvalues ascending; eigenvector j
/// is `vectors[j]`.
pub fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = diag.len();
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    if off.len() + 1 != n {
        return Err(DwmError::LengthMismatch {
            expected: n - 1,
            got: off.len(),
        });
    }
    let mut d = diag.to_vec();
    // e[i] couples rows i and i+1; e[n-1] is scratch.
    let mut e = off.to_vec();
    e.push(0.0);
    // z is stored row-major as z[row * n + col]; column j is eigenvector j.
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }

    for l in 0..n {
        let mut iter = 0;
        loop {
            // find a negligible off-diagonal element
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(DwmError::NoConvergence { index: l });
            }

            // shift from the leading 2×2 block
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in 0..n {
                    let zi1 = z[row * n + i + 1];
                    let zi = z[row * n + i];
                    z[row * n + i + 1] = s * zi + c * zi1;
                    z[row * n + i] = c * zi - s * zi1;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&j| d[j]).collect();
    let vectors = order
        .iter()
        .map(|&j| {
            let mut v: Vec<f64> = (0..n).map(|row| z[row * n + j]).collect();
            fix_sign(&mut v);
            v
        })
        .collect();
    Ok((values, vectors))
}

/// Deterministic sign: the first non-negligible component is positive.
fn fix_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let lead = v
        .iter()
        .copied()
        .find(|x| x.abs() > 1e-6 * max)
        .unwrap_or(0.0);
    if lead < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Number of eigenvalues strictly below `x`, from the sign changes of the
/// LDLᵀ pivots of (T − x).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let scale = diag.iter().fold(0.0f64, |m, d| m.max(d.abs()))
        + off.iter().fold(0.0f64, |m, e| m.max(e.abs()))
        + x.abs();
    let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * scale.max(1.0));
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        let coupling = if i == 0 {
            0.0
        } else {
            off[i - 1] * off[i - 1] / q
        };
        q = d - x - coupling;
        if q.abs() < pivmin {
            // an exact zero pivot means x is an eigenvalue: not strictly below
            q = pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}
