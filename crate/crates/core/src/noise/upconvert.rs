//! SAW thermal noise converted into the MW output.
//!
//! The SAW mode couples to its thermal bath through its internal rate
//! `Γ_int = Γ − ports·Γ_ex`. Through the network resolvent `G = (fI − M)⁻¹`
//! the output flux density is
//!
//! ```text
//! S(f) = γ_ex Γ_int n̄ |G_ms(f)|² + background
//! ```
//!
//! and the peak area per unit occupation (the conversion-bandwidth factor)
//! is `F = γ_ex Γ_int ∫|G_ms|² df = 2π γ_ex Γ_int P_mm`, where `P` solves the
//! Lyapunov equation `i(MP − PM†) = e_s e_sᵀ`. Dividing a spectrum by `F`
//! gives a phonon-number density whose integral is `n̄`.

use nalgebra::DMatrix;

use super::{NoiseError, NoisePsd, Result, ThermalBath};
use crate::device::DeviceParams;
use crate::quantum::C64;
use crate::scattering::LinearModeNetwork;

const MW: usize = 0;
const SAW: usize = 2;

/// Up-converted spectrum on `grid` (offsets in Hz), with the configured
/// floor as background.
pub fn upconverted_psd(p: &DeviceParams, net: &LinearModeNetwork, bath: &ThermalBath, grid: &[f64]) -> Result<NoisePsd> {
    let n = bath.occupation();
    let gamma_int = p.saw.linewidth_internal();
    let gamma_ex = net.external()[MW];
    let values = grid
        .iter()
        .map(|&f| Ok(gamma_ex * gamma_int * n * net.response(f)?[(MW, SAW)].norm_sqr() + p.noise.floor))
        .collect::<Result<Vec<f64>>>()?;
    let mut psd = NoisePsd::new(grid.to_vec(), values, vec![p.noise.floor; grid.len()])?;
    psd.metadata.bath = Some(*bath);
    psd.metadata.occupation = Some(n);
    psd.metadata.conversion_factor = Some(conversion_bandwidth_factor(p, net)?);
    psd.metadata.lorentzian_factor = Some(lorentzian_area_factor(p, net)?);
    Ok(psd)
}

/// Center and full width at half maximum of the converted peak `|G_ms|²`
/// near the SAW resonance, Hz.
pub fn peak_shape(net: &LinearModeNetwork) -> Result<(f64, f64)> {
    let gamma = net.rates()[SAW];
    let h = |f: f64| -> Result<f64> { Ok(net.response(f)?[(MW, SAW)].norm_sqr()) };
    // coarse scan over a few linewidths, then golden-section refinement
    let span = 10.0 * gamma;
    let n = 400;
    let mut best = (0.0, f64::NEG_INFINITY);
    for k in 0..=n {
        let f = -span + 2.0 * span * k as f64 / n as f64 + net.detunings().saw;
        let v = h(f)?;
        if v > best.1 {
            best = (f, v);
        }
    }
    let step = 2.0 * span / n as f64;
    let (mut a, mut b) = (best.0 - step, best.0 + step);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let (c, d) = (b - r * (b - a), a + r * (b - a));
        if h(c)? > h(d)? {
            b = d;
        } else {
            a = c;
        }
    }
    let center = 0.5 * (a + b);
    let half = 0.5 * h(center)?;
    let crossing = |dir: f64| -> Result<f64> {
        let mut lo = 0.0;
        let mut hi = gamma;
        while h(center + dir * hi)? > half {
            lo = hi;
            hi *= 2.0;
            if hi > 1e6 * gamma {
                return Err(NoiseError::InvalidSpectrum("peak has no half-maximum crossing".into()));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h(center + dir * mid)? > half {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    };
    Ok((center, crossing(1.0)? + crossing(-1.0)?))
}

/// Area of the Lorentzian matching the converted peak's height and FWHM, per
/// unit occupation: `γ_ex Γ_int |G_ms(f₀)|² · π·FWHM/2`. The exact peak
/// falls off faster than a Lorentzian away from the center, so this exceeds
/// [`conversion_bandwidth_factor`] by a few percent at the operating point.
pub fn lorentzian_area_factor(p: &DeviceParams, net: &LinearModeNetwork) -> Result<f64> {
    let (center, fwhm) = peak_shape(net)?;
    let peak = net.response(center)?[(MW, SAW)].norm_sqr();
    Ok(net.external()[MW] * p.saw.linewidth_internal() * peak * std::f64::consts::FRAC_PI_2 * fwhm)
}

/// Peak area of [`upconverted_psd`] per unit SAW occupation, quanta/s.
pub fn conversion_bandwidth_factor(p: &DeviceParams, net: &LinearModeNetwork) -> Result<f64> {
    let m = net.mode_matrix();
    let mut a = DMatrix::<C64>::zeros(9, 9);
    // column-stacked vec: vec(MP) = (I⊗M) vec P, vec(P M†) = (M̄⊗I) vec P
    for j in 0..3 {
        for i in 0..3 {
            let row = i + 3 * j;
            for k in 0..3 {
                a[(row, i + 3 * k)] -= C64::i() * m[(j, k)].conj();
                a[(row, k + 3 * j)] += C64::i() * m[(i, k)];
            }
        }
    }
    let mut d = nalgebra::DVector::<C64>::zeros(9);
    d[SAW + 3 * SAW] = C64::new(1.0, 0.0);
    let sol = a
        .lu()
        .solve(&d)
        .ok_or(crate::scattering::ScatteringError::Singular(0.0))?;
    let p_mm = sol[MW + 3 * MW].re;
    Ok(2.0 * std::f64::consts::PI * net.external()[MW] * p.saw.linewidth_internal() * p_mm)
}

/// Output flux density per unit intra-resonator phonon spectral density at
/// the SAW resonance, `2π γ_ex |G_ms / G_ss|²` (1/s).
pub fn sensitivity_conversion(net: &LinearModeNetwork) -> Result<f64> {
    let g = net.response(0.0)?;
    let ratio = g[(MW, SAW)] / g[(SAW, SAW)];
    Ok(2.0 * std::f64::consts::PI * net.external()[MW] * ratio.norm_sqr())
}

/// Displacement noise floor `x_zpf √(background / conversion)` in m/√Hz, with
/// `background` in quanta·s⁻¹·Hz⁻¹ and `conversion` from
/// [`sensitivity_conversion`].
pub fn displacement_sensitivity(x_zpf: f64, background: f64, conversion: f64) -> Result<f64> {
    if !(conversion > 0.0) {
        return Err(NoiseError::ZeroConversion(conversion));
    }
    Ok(x_zpf * (background.max(0.0) / conversion).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::parse_config;

    fn params() -> DeviceParams {
        parse_config(include_str!("../../../../device_reference.cfg")).unwrap()
    }

    #[test]
    fn zero_occupation_is_flat() {
        let p = params();
        let net = LinearModeNetwork::at_operating_point(&p).unwrap();
        let grid: Vec<f64> = (-50..=50).map(|k| k as f64 * 2e3).collect();
        let psd = upconverted_psd(&p, &net, &ThermalBath::new(0.0, 781e6), &grid).unwrap();
        assert!(psd.values.iter().all(|&v| v == p.noise.floor));
    }

    #[test]
    fn lyapunov_factor_matches_quadrature() {
        let p = params();
        let net = LinearModeNetwork::at_operating_point(&p).unwrap();
        let f = conversion_bandwidth_factor(&p, &net).unwrap();
        // |G_ms|² has a narrow SAW-like peak on a broad qubit-like pedestal
        let mut area = 0.0;
        let (lo, hi, n) = (-2e9, 2e9, 4_000_000);
        let h = (hi - lo) / n as f64;
        let gi = |x: f64| net.response(x).unwrap()[(MW, SAW)].norm_sqr();
        for k in 0..n {
            let x = lo + (k as f64 + 0.5) * h;
            area += gi(x) * h;
        }
        let area = area * net.external()[MW] * p.saw.linewidth_internal();
        assert!((area - f).abs() / f < 1e-3, "{area} vs {f}");
    }

    #[test]
    fn sensitivity_scaling() {
        assert_eq!(displacement_sensitivity(7e-18, 0.0, 1.0).unwrap(), 0.0);
        let a = displacement_sensitivity(7e-18, 1.0, 10.0).unwrap();
        let b = displacement_sensitivity(7e-18, 4.0, 10.0).unwrap();
        assert!((b / a - 2.0).abs() < 1e-15);
        assert!(displacement_sensitivity(7e-18, 1.0, 0.0).is_err());
    }
}
