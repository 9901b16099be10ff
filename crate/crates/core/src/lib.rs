//! Numerical workbench for discrete wave mechanics: bound states of static
//! and drifting potential wells on a tight-binding lattice and their
//! velocity-dependent mass renormalization.

pub mod boost;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod lattice;
pub mod scenarios;
pub mod spectral;
pub mod state;

pub use boost::{
    boosted_initial_state, dispersion, effective_depth, momentum_potential,
    momentum_potential_extrema, solve_boost, BoostParameters, Extremum, ExtremumKind,
};
pub use dynamics::{
    estimate_lifetime, evolve, harmonic_ground_state, radiation_tail_norm, rhs, rk4_step,
    EvolutionConfig, StepMode, SurvivalObservable, TrajectoryRecord,
};
pub use error::{DwmError, Result};
pub use lattice::{sample_potential, Boundary, LatticeModel, PotentialSpec, WellShape};
pub use spectral::{
    assemble_hamiltonian, classify_bound_states, classify_bound_states_strict, eigendecompose,
    predicted_bound_count, pt_analytic_levels, sturm_count_below, SpectrumReport,
    TridiagonalHamiltonian,
};
pub use state::{
    inner_product, localized_fraction, norm_sq, parity_score, participation_ratio, WaveState,
};
