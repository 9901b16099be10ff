//! Float formatting shared by every text output.

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Comma-separated 17-digit floats.
pub fn join17(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| fmt17(*v))
        .collect::<Vec<_>>()
        .join(",")
}
