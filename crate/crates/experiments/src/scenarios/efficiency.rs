//! Normalized conversion efficiency over the two drive powers at several
//! single-photon detunings.

use saw_transducer::device::{stark_coefficients, DeviceParams};
use saw_transducer::scattering::{efficiency_on_resonance, sweep_drive_powers, EfficiencyMap, LinearModeNetwork, PowerGrid};

use super::{Check, Outcome, Tolerance};
use crate::ComponentError;

pub const DETUNINGS_MHZ: [u32; 5] = [0, 20, 40, 60, 80];

/// Default sweep: 50×50 cells up to 0.3 mW on drive 1 and 1 mW on drive 2.
pub fn default_grid() -> PowerGrid {
    PowerGrid::linear(0.3, 1.0, 50)
}

/// Distance of the per-row maxima from the `Δ_f = 0` line, in grid cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RidgeDeviation {
    pub max_cells: f64,
    /// Rows whose line crossing lies strictly inside the grid.
    pub rows: usize,
}

/// Compares the ridge of `map` with the line `δ + s₁c₁²P₁ + s₂c₂²P₂ = 0`
/// using perpendicular distance in index coordinates. Needs a grid that
/// starts at zero power with uniform spacing; `None` if the Stark
/// coefficients vanish.
pub fn ridge_deviation(map: &EfficiencyMap, p: &DeviceParams) -> Option<RidgeDeviation> {
    let (n1, n2) = (map.p1.len(), map.p2.len());
    if n1 < 3 || n2 < 3 {
        return None;
    }
    let (d1, d2) = (map.p1[1] - map.p1[0], map.p2[1] - map.p2[0]);
    let a = map.stark[0] * p.drive.calibration_mw.powi(2) * d1;
    let b = map.stark[1] * p.drive.calibration_saw.powi(2) * d2;
    if b == 0.0 {
        return None;
    }
    let norm = a.hypot(b);
    let ridge = map.ridge();
    let mut worst: f64 = 0.0;
    let mut rows = 0;
    // row 0 has no drive-1 power and therefore no conversion
    for (i, &j) in ridge.iter().enumerate().skip(1) {
        let j_line = -(map.detuning + a * i as f64) / b;
        if j_line < 1.0 || j_line > (n2 - 2) as f64 {
            continue;
        }
        worst = worst.max((map.detuning + a * i as f64 + b * j as f64).abs() / norm);
        rows += 1;
    }
    Some(RidgeDeviation { max_cells: worst, rows })
}

pub(super) fn run(p: &DeviceParams) -> Result<Outcome, ComponentError> {
    let mut out = Outcome::default();
    let grid = default_grid();
    for mhz in DETUNINGS_MHZ {
        let map = sweep_drive_powers(p, mhz as f64 * 1e6, &grid)?;
        let (i, j) = map.argmax();
        out.checks.push(Check::new(format!("max eta_norm at {mhz} MHz"), 1.0, map.values[i][j], Tolerance::Info));
        match ridge_deviation(&map, p) {
            Some(dev) if dev.rows > 0 => out.checks.push(Check::new(
                format!("ridge offset from constant shift, {mhz} MHz (cells)"),
                0.0,
                dev.max_cells,
                Tolerance::Absolute(1.0),
            )),
            _ => out.notes.push(format!("{mhz} MHz: constant-shift line does not cross the grid")),
        }
        out.files.push((format!("fig3b_detuning{mhz}MHz.csv"), map.to_csv()));
    }
    let net = LinearModeNetwork::at_operating_point(p)?;
    let (cm, cs) = net.cooperativities()?;
    out.checks.push(Check::new("eta_norm at operating point", 0.39, efficiency_on_resonance(cm, cs, 1.0, 1.0), Tolerance::Relative(0.02)));
    out.checks.push(Check::new("cooperativity C_m", 0.82, cm, Tolerance::Info));
    out.checks.push(Check::new("cooperativity C_s", 0.82, cs, Tolerance::Relative(0.01)));
    out.notes.push(format!("Stark coefficients (1/Hz) at 0 MHz: {:?}", stark_coefficients(p, 0.0)?));
    Ok(out)
}
