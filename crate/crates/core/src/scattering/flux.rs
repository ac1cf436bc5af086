use super::network::{LinearModeNetwork, SAW};
use super::Result;
use crate::device::DeviceParams;

/// Reference line for the output flux. `UnitEfficiency` is `η̃ = 1`, i.e.
/// `P_m = η_m η_s P_s`; `FourFold` is the same line scaled by 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundNormalization {
    UnitEfficiency,
    FourFold,
}

pub fn flux_bound(eta_m: f64, eta_s: f64, input_flux: f64, normalization: BoundNormalization) -> f64 {
    let base = eta_m * eta_s * input_flux;
    match normalization {
        BoundNormalization::UnitEfficiency => base,
        BoundNormalization::FourFold => 4.0 * base,
    }
}

/// Output MW photon flux for each input SAW phonon flux (quanta/s).
///
/// With a nonzero `drive.saw_pull_per_phonon` the SAW detuning becomes
/// `Δ_s + pull · n_s`, where the intra-resonator phonon number
/// `n_s = Γ_ex |G_ss|² P_s / 2π` is solved self-consistently (lowest
/// solution). Zero pull gives the straight line `P_m = η P_s`.
pub fn flux_transfer_line(p: &DeviceParams, net: &LinearModeNetwork, input_flux: &[f64]) -> Result<Vec<f64>> {
    let pull = p.drive.saw_pull_per_phonon;
    let eta0 = net.conversion_efficiency(0.0)?;
    input_flux
        .iter()
        .map(|&flux| {
            let flux = flux.max(0.0);
            if pull == 0.0 || flux == 0.0 {
                return Ok(eta0 * flux);
            }
            let n = phonon_number(net, pull, flux)?;
            let mut det = net.detunings();
            det.saw += pull * n;
            Ok(net.with_detunings(det).conversion_efficiency(0.0)? * flux)
        })
        .collect()
}

fn occupation_per_flux(net: &LinearModeNetwork, pull: f64, n: f64) -> Result<f64> {
    let mut det = net.detunings();
    det.saw += pull * n;
    let g = net.with_detunings(det).response(0.0)?;
    Ok(net.external()[SAW] * g[(SAW, SAW)].norm_sqr() / (2.0 * std::f64::consts::PI))
}

/// Lowest root of `n = flux · f(n)`: scan upward for the first sign change,
/// then bisect. Power balance bounds the root by `flux / (2π Γ)`.
fn phonon_number(net: &LinearModeNetwork, pull: f64, flux: f64) -> Result<f64> {
    let residual = |n: f64| -> Result<f64> { Ok(n - flux * occupation_per_flux(net, pull, n)?) };
    let n_max = 1.01 * flux / (2.0 * std::f64::consts::PI * net.rates()[SAW]);
    let steps = 400;
    let mut lo = 0.0;
    let mut hi = n_max;
    let mut prev = residual(0.0)?;
    for k in 1..=steps {
        let n = n_max * k as f64 / steps as f64;
        let r = residual(n)?;
        if prev <= 0.0 && r >= 0.0 {
            lo = n_max * (k - 1) as f64 / steps as f64;
            hi = n;
            break;
        }
        prev = r;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if residual(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
