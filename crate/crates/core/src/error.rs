use thiserror::Error;

pub type Result<T> = std::result::Result<T, DwmError>;

#[derive(Debug, Error)]
pub enum DwmError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("drift velocity |v| = {0} exceeds the critical velocity 2κa; no real boost phase")]
    BeyondCriticalVelocity(f64),

    #[error("tabulated potential cannot drift (v·t = {0})")]
    TabulatedDrift(f64),

    #[error("length mismatch: expected {expected} sites, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("zero state vector")]
    ZeroState,

    #[error("reflection center {0} does not map lattice sites onto sites")]
    IncompatibleCenter(f64),

    #[error("eigensolver failed to converge for eigenvalue index {index}")]
    NoConvergence { index: usize },

    #[error(
        "bound-state classification disagrees at index {index}: energy says {by_energy}, \
         participation ratio says {by_participation}"
    )]
    ClassificationMismatch {
        index: usize,
        by_energy: bool,
        by_participation: bool,
    },

    #[error("norm drift {drift:e} at t = {t} exceeds tolerance (time step too large)")]
    NormDrift { drift: f64, t: f64 },

    #[error("adaptive step underflow at t = {t}: dt = {dt:e}")]
    StepUnderflow { t: f64, dt: f64 },

    #[error("time step {dt} is outside the RK4 stability region (dt·‖H‖ ≈ {product:.3} > 2√2)")]
    UnstableStep { dt: f64, product: f64 },

    #[error("state width σ = {0} is below one lattice spacing")]
    UnresolvedState(f64),

    #[error("no exponential regime in fit window: {0}")]
    NoExponentialRegime(String),

    #[error("expected at least 2 bound states, found {0}")]
    MissingBoundStates(usize),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
