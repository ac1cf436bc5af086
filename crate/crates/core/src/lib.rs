//! Simulation library for a qubit-mediated converter between a microwave
//! resonator and a surface-acoustic-wave resonator.
//!
//! * [`quantum`]: truncated operators, Lindblad steady states and spectra.
//! * [`device`]: device parameters, Hamiltonians and perturbative formulas.
//! * [`scattering`]: linear coupled-mode conversion network.
//! * [`noise`]: thermal occupation and up-converted noise spectra.
//! * [`fitting`]: least-squares line-shape fits.

pub mod device;
pub mod fitting;
pub mod noise;
pub mod quantum;
pub mod scattering;
pub mod units;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
