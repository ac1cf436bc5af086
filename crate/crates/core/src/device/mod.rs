//! Device physics: parameters, the ladder and parametric Hamiltonians,
//! dispersive and Stark formulas, drive-induced couplings, and the
//! zero-point-fluctuation geometry chain.
//!
//! Inputs and outputs are ordinary frequencies in Hz. Hamiltonians come back
//! as `H/ħ` in rad/s.

mod config;
mod formulas;
mod geometry;
mod hamiltonian;
mod open_system;
mod params;
mod stark;

pub use config::{parse_config, write_config, ConfigError};
pub use formulas::{
    coupling_from_dispersive_shift, dispersive_shift, parametric_coupling, parametric_drive_frequencies,
    quanta_from_stark_shift, resonator_pull, stark_per_quantum, transmon_levels,
};
pub use geometry::{coupling_from_geometry, GeometryEstimate};
pub use hamiltonian::{
    build_hamiltonian, ladder_charges, parametric_charges, parametric_hamiltonian, Detunings,
};
pub use open_system::{parametric_open_system, steady_state_conversion, OpenSystemOptions};
pub use params::{
    CouplingParams, DeviceParams, DrivePort, DriveSettings, DriveTone, GeometryParams, NoiseSettings,
    ResonatorParams, TransmonParams,
};
pub use stark::{stark_coefficient, stark_coefficients, stark_shift_of_f};

#[derive(Debug, thiserror::Error)]
pub enum DeviceError {
    #[error("resonant denominator in {0}")]
    Resonant(&'static str),
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, DeviceError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> DeviceError {
    DeviceError::InvalidParameter { name, reason: reason.into() }
}

/// Denominators smaller than this fraction of the frequency scale count as
/// resonant.
pub(crate) fn check_denominator(den: f64, scale: f64, what: &'static str) -> Result<f64> {
    if !den.is_finite() || den.abs() <= 1e-12 * scale.abs().max(1.0) {
        Err(DeviceError::Resonant(what))
    } else {
        Ok(den)
    }
}
