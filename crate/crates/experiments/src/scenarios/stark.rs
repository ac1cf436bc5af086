//! Qubit Stark shift against resonator drive power, used to calibrate
//! intra-resonator quanta per unit power.

use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use saw_transducer::device::{dispersive_shift, stark_per_quantum, DeviceParams, ResonatorParams};
use saw_transducer::fitting::fit_linear;
use saw_transducer::units::{angular, mw_to_dbm, HBAR};

use super::{csv, Check, Outcome, Tolerance};
use crate::ComponentError;

/// Resonant intra-resonator quanta per mW arriving at one port,
/// `4 κ_ex / (κ² ħω)` with angular rates.
pub(crate) fn quanta_per_mw(res: &ResonatorParams) -> f64 {
    let (k, kex) = (angular(res.linewidth_total), angular(res.linewidth_external));
    4.0 * kex / (k * k * HBAR * angular(res.omega)) * 1e-3
}

pub(super) fn run(p: &DeviceParams, rng: &mut ChaCha8Rng) -> Result<Outcome, ComponentError> {
    let t = &p.transmon;
    let mut out = Outcome::default();
    for (label, file, res, g) in [
        ("mw", "fig2_stark_mw.csv", &p.mw, p.coupling.g_mw),
        ("saw", "fig2_stark_saw.csv", &p.saw, p.coupling.g_saw),
    ] {
        let chi = dispersive_shift(g, t.omega_e, res.omega)?;
        let chi_q = stark_per_quantum(chi, t.alpha(), res.omega, t.omega_e)?;
        let k = quanta_per_mw(res);
        // up to 20 quanta in 16 steps, scatter 2% of the largest shift
        let n = 16;
        let power: Vec<f64> = (0..n).map(|i| 20.0 / k * i as f64 / (n - 1) as f64).collect();
        let normal = Normal::new(0.0, 0.02 * (chi_q * 20.0).abs()).expect("finite noise");
        let shift: Vec<f64> = power.iter().map(|&pw| chi_q * k * pw + normal.sample(rng)).collect();
        let fit = fit_linear(&power, &shift)?;
        out.checks.push(Check::new(format!("{label} quanta per mW"), k, fit.slope / chi_q, Tolerance::Relative(0.05)));
        out.checks.push(Check::new(format!("{label} fit r^2"), 1.0, fit.r_squared, Tolerance::Absolute(0.01)));
        out.checks.push(Check::new(format!("{label} Stark shift per quantum (Hz)"), chi_q, chi_q, Tolerance::Info));
        out.files.push((
            file.to_string(),
            csv(
                "power_dbm,power_mw,quanta,shift_hz",
                power.iter().zip(&shift).skip(1).map(|(&pw, &s)| vec![mw_to_dbm(pw), pw, k * pw, s]),
            ),
        ));
    }
    Ok(out)
}
