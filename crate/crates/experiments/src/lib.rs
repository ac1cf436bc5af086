//! Desk-scale reproductions of the transducer measurements.
//!
//! Each [`Scenario`] turns a device config into plot-ready CSV files, a
//! `summary.txt` comparing extracted numbers against reference values and a
//! `manifest.json`. Synthetic noise is Gaussian, drawn from a ChaCha8
//! generator seeded with the run's 64-bit seed, so a fixed (config, seed)
//! pair reproduces every CSV byte for byte.

pub mod acceptance;
pub mod config;
pub mod fit;
pub mod manifest;
pub mod scenarios;

use std::path::PathBuf;

pub use manifest::RunManifest;
pub use scenarios::{run, Check, Outcome, Scenario, Tolerance};

/// Failure inside one of the model components.
#[derive(Debug, thiserror::Error)]
pub enum ComponentError {
    #[error(transparent)]
    Device(#[from] saw_transducer::device::DeviceError),
    #[error(transparent)]
    Quantum(#[from] saw_transducer::quantum::QuantumError),
    #[error(transparent)]
    Scattering(#[from] saw_transducer::scattering::ScatteringError),
    #[error(transparent)]
    Noise(#[from] saw_transducer::noise::NoiseError),
    #[error(transparent)]
    Fit(#[from] saw_transducer::fitting::FitError),
    #[error("{0}")]
    Other(String),
}

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("invalid config: {0}")]
    Config(#[from] saw_transducer::device::ConfigError),
    #[error("override `{0}` is not of the form key=value")]
    Override(String),
    #[error("scenario `{0}` generates synthetic noise and needs a seed")]
    MissingSeed(&'static str),
    #[error("{scenario}: {source}")]
    Scenario {
        scenario: &'static str,
        #[source]
        source: ComponentError,
    },
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot read data: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, ExperimentError>;

/// Full-precision scientific notation (17 significant digits).
pub(crate) fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

impl ExperimentError {
    /// Process exit status: 1 for a failed computation, 2 for bad input or
    /// I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            ExperimentError::Scenario { .. } => 1,
            _ => 2,
        }
    }
}
