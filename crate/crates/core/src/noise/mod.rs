//! Thermal occupation, up-converted SAW noise at the MW port, amplifier
//! chains and displacement sensitivity.
//!
//! Spectra are single-sided photon-flux densities in quanta·s⁻¹·Hz⁻¹ at the
//! MW resonator output plane, so `∫ S df` is a flux in quanta/s.

mod chain;
mod psd;
mod thermal;
mod upconvert;

pub use chain::{apply_chain, AmplifierChain};
pub use psd::{NoisePsd, PsdMetadata};
pub use thermal::{bose_einstein, effective_temperature, ThermalBath};
pub use upconvert::{
    conversion_bandwidth_factor, displacement_sensitivity, lorentzian_area_factor, peak_shape,
    sensitivity_conversion, upconverted_psd,
};

#[derive(Debug, thiserror::Error)]
pub enum NoiseError {
    #[error("occupation must be positive, got {0}")]
    NonPositiveOccupation(f64),
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("conversion factor must be positive, got {0}")]
    ZeroConversion(f64),
    #[error(transparent)]
    Scattering(#[from] crate::scattering::ScatteringError),
}

pub type Result<T> = std::result::Result<T, NoiseError>;
