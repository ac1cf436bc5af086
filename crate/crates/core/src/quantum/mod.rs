//! Truncated Fock-space operator algebra and Lindblad open-system solvers.
//!
//! Composite states live on `MW ⊗ qubit ⊗ SAW` in that fixed order. All
//! Hamiltonians are `H/ħ` in rad/s and collapse rates are angular.

mod correlation;
mod evolve;
mod liouvillian;
mod operator;
mod state;
mod steady;

pub use correlation::{two_time_psd, two_time_psd_resolvent, CorrelatorOptions};
pub use evolve::{evolve, spectral_radius_bound};
pub use liouvillian::{lindblad, Collapse, Grading, Liouvillian};
pub use operator::{
    annihilator, embed, transmon_projector, HilbertConfig, OperatorMatrix, Subsystem, GROUND,
    EXCITED, SECOND,
};
pub use state::DensityState;
pub use steady::{steady_state, steady_state_dense};

use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = nalgebra::DMatrix<C64>;

#[derive(Debug, thiserror::Error)]
pub enum QuantumError {
    #[error("Fock truncation {0} is below the minimum of 2")]
    TruncationTooSmall(usize),
    #[error("transmon needs at least 3 levels, got {0}")]
    TooFewQubitLevels(usize),
    #[error("level index {level} out of range for {n_levels} transmon levels")]
    LevelOutOfRange { level: usize, n_levels: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operator is not Hermitian (relative deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("negative collapse rate {0}")]
    NegativeRate(f64),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("grading incompatible with operator: {0}")]
    IncompatibleGrading(String),
    #[error("steady state is degenerate or ill-conditioned (condition estimate {condition:.3e})")]
    IllConditioned { condition: f64 },
    #[error("step size {dt:e} s too large: dt times spectral radius = {product:.3} (limit 0.1)")]
    StepTooLarge { dt: f64, product: f64 },
    #[error("trace drifted by {0:.3e} during evolution")]
    TraceDrift(f64),
    #[error("correlator did not decay below threshold within tau_max = {tau_max:e} s")]
    NonDecayingCorrelator { tau_max: f64 },
    #[error("invalid frequency grid: {0}")]
    InvalidGrid(String),
    #[error("spectrum has significant negative values (min {0:.3e}); operators are not an adjoint pair")]
    NotAPowerSpectrum(f64),
}

pub type Result<T> = std::result::Result<T, QuantumError>;
