//! Physical constants and unit conversions.
//!
//! Every public interface of this crate takes ordinary frequencies in Hz
//! (the `ω/2π` values quoted for the device). Angular frequencies only appear
//! inside Hamiltonians, Liouvillians and response functions.

use std::f64::consts::PI;

/// Planck constant, J·s.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = PLANCK / (2.0 * PI);
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

pub const MICRON2: f64 = 1e-12;

/// Hz → rad/s.
#[inline]
pub fn angular(hz: f64) -> f64 {
    2.0 * PI * hz
}

/// rad/s → Hz.
#[inline]
pub fn ordinary(rad_per_s: f64) -> f64 {
    rad_per_s / (2.0 * PI)
}

/// Linear power ratio from decibels.
#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[inline]
pub fn linear_to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

/// dBm → mW.
#[inline]
pub fn dbm_to_mw(dbm: f64) -> f64 {
    db_to_linear(dbm)
}

#[inline]
pub fn mw_to_dbm(mw: f64) -> f64 {
    linear_to_db(mw)
}
