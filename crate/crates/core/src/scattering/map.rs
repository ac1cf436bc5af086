use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::network::{couplings_at, LinearModeNetwork};
use super::{Result, ScatteringError};
use crate::device::{stark_coefficients, DeviceParams, Detunings};
use crate::units::mw_to_dbm;

/// Drive powers (mW, referred to the calibration plane) along both axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerGrid {
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
}

impl PowerGrid {
    /// `n` evenly spaced powers from 0 to each maximum, inclusive.
    pub fn linear(max1: f64, max2: f64, n: usize) -> Self {
        let axis = |max: f64| -> Vec<f64> {
            if n == 1 {
                return vec![max];
            }
            (0..n).map(|i| max * i as f64 / (n - 1) as f64).collect()
        };
        Self { p1: axis(max1), p2: axis(max2) }
    }
}

/// Normalized efficiency `η̃ = η/(η_m η_s)` over a power grid.
/// `values[i][j]` belongs to `p1[i]`, `p2[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyMap {
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    /// Single-photon detuning of the drives, Hz.
    pub detuning: f64,
    /// Stark coefficients used, 1/Hz.
    pub stark: [f64; 2],
}

impl EfficiencyMap {
    /// Grid index of the global maximum (first in row-major order on ties).
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut value = f64::NEG_INFINITY;
        for (i, row) in self.values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v > value {
                    value = v;
                    best = (i, j);
                }
            }
        }
        best
    }

    /// For every drive-1 power, the drive-2 index of the largest value.
    pub fn ridge(&self) -> Vec<usize> {
        self.values
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |acc, (j, &v)| if v > acc.1 { (j, v) } else { acc })
                    .0
            })
            .collect()
    }

    /// Long-format CSV: one row per cell with powers in dBm and mW.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p1_dbm,p1_mw,p2_dbm,p2_mw,eta_norm\n");
        for (i, &p1) in self.p1.iter().enumerate() {
            for (j, &p2) in self.p2.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                    mw_to_dbm(p1),
                    p1,
                    mw_to_dbm(p2),
                    p2,
                    self.values[i][j]
                );
            }
        }
        out
    }
}

/// Evaluates `η̃` on the grid. Each cell maps powers to amplitudes through
/// the configured calibration, computes both parametric couplings and the
/// Stark-shifted `Δ_f = δ + s₁Ω₁² + s₂Ω₂²`, and reads the SAW → MW element of
/// the scattering matrix. The resonators stay on two-photon resonance.
pub fn sweep_drive_powers(p: &DeviceParams, detuning: f64, grid: &PowerGrid) -> Result<EfficiencyMap> {
    if grid.p1.is_empty() || grid.p2.is_empty() {
        return Err(ScatteringError::EmptyGrid);
    }
    let stark = stark_coefficients(p, detuning)?;
    let base = LinearModeNetwork::from_device(p, 0.0, 0.0, Detunings::default())?;
    let (eta_m, eta_s) = base.coupling_factors();
    let norm = eta_m * eta_s;
    let values = grid
        .p1
        .par_iter()
        .map(|&p1| {
            grid.p2
                .iter()
                .map(|&p2| {
                    let o1 = p.drive.amplitude_for_power(p1, true);
                    let o2 = p.drive.amplitude_for_power(p2, false);
                    let (g_pm, g_ps) = couplings_at(p, o1, o2)?;
                    let delta_f = detuning + stark[0] * o1 * o1 + stark[1] * o2 * o2;
                    let net = LinearModeNetwork::from_device(
                        p,
                        g_pm,
                        g_ps,
                        Detunings { mw: 0.0, f: delta_f, saw: 0.0 },
                    )?;
                    Ok(net.conversion_efficiency(0.0)? / norm)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EfficiencyMap { p1: grid.p1.clone(), p2: grid.p2.clone(), values, detuning, stark })
}
