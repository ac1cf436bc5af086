use serde::{Deserialize, Serialize};

use super::{invalid, params::GeometryParams, Result};
use crate::units::{ELEMENTARY_CHARGE, HBAR, MICRON2};

/// SAW coupling and zero-point amplitudes derived from the IDT geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryEstimate {
    /// `g_s/2π` from `ħ g_s = e V_zpf C_IDT / C`, Hz.
    pub g_saw: f64,
    /// `g_s/2π` from the area scaling `prefactor · √(1 μm²/A)`, Hz. With the
    /// prefactor `e φ₀ (C_IDT/C)/h` this equals `g_saw`.
    pub g_saw_scaling: f64,
    /// Prefactor of the area scaling, Hz.
    pub prefactor: f64,
    pub v_zpf: f64,
    pub x_zpf: f64,
}

/// Evaluates the charge-coupling chain. `ħ g_s = e V_zpf C_IDT/C` is solved
/// for the angular `g_s` and reported as `g_s/2π = e V_zpf (C_IDT/C) / h`.
pub fn coupling_from_geometry(geom: &GeometryParams) -> Result<GeometryEstimate> {
    if !(geom.mode_area > 0.0) {
        return Err(invalid("geometry.mode_area", "must be positive"));
    }
    geom.validate()?;
    let v_zpf = geom.v_zpf();
    let ratio = geom.c_idt / geom.c_total;
    let g_angular = ELEMENTARY_CHARGE * v_zpf * ratio / HBAR;
    let prefactor = geom.coupling_prefactor();
    Ok(GeometryEstimate {
        g_saw: g_angular / (2.0 * std::f64::consts::PI),
        g_saw_scaling: prefactor * (MICRON2 / geom.mode_area).sqrt(),
        prefactor,
        v_zpf,
        x_zpf: geom.x_zpf(),
    })
}
