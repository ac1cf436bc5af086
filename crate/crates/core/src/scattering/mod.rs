//! Linear input-output model of the MW mode ↔ g–f transition ↔ SAW mode
//! chain.
//!
//! Phasors follow `e^{−iωt}`. With the mode matrix `M` (detunings `Δ − i
//! rate/2` on the diagonal, parametric couplings off the diagonal) and `K` the
//! port matrix of `√(external rate)` entries, the two-port scattering matrix
//! (ports MW, SAW) at probe offset `ω` is
//!
//! ```text
//! S(ω) = I − i K (ωI − M)⁻¹ Kᵀ
//! ```
//!
//! Every quantity is in Hz; `S` is invariant under the common 2π rescaling.

mod flux;
mod map;
mod network;

pub use flux::{flux_bound, flux_transfer_line, BoundNormalization};
pub use map::{sweep_drive_powers, EfficiencyMap, PowerGrid};
pub use network::{cooperativity, efficiency_on_resonance, LinearModeNetwork};

#[derive(Debug, thiserror::Error)]
pub enum ScatteringError {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("mode matrix is singular at offset {0} Hz (undamped network)")]
    Singular(f64),
    #[error("{0} must be positive")]
    ZeroRate(&'static str),
    #[error("empty power grid")]
    EmptyGrid,
    #[error(transparent)]
    Device(#[from] crate::device::DeviceError),
}

pub type Result<T> = std::result::Result<T, ScatteringError>;
