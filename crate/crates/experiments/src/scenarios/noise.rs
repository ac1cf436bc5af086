//! Up-converted SAW thermal noise at the MW output and the occupation
//! extracted from a Lorentzian fit.

use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use saw_transducer::device::{coupling_from_geometry, DeviceParams};
use saw_transducer::fitting::{fit_lorentzian, LorentzianFit};
use saw_transducer::noise::{
    apply_chain, bose_einstein, displacement_sensitivity, peak_shape, sensitivity_conversion, upconverted_psd,
    AmplifierChain, NoisePsd, ThermalBath,
};
use saw_transducer::scattering::LinearModeNetwork;

use super::{Check, Outcome, Tolerance};
use crate::{sci, ComponentError};

/// Synthetic trace: points over ±5 model widths around the peak, Gaussian
/// scatter of 5% of the peak height above the background.
pub const TRACE_POINTS: usize = 8001;
pub const TRACE_SPAN_WIDTHS: f64 = 5.0;
pub const RELATIVE_NOISE: f64 = 0.05;

#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub psd: NoisePsd,
    pub noisy: Vec<f64>,
    pub fit: LorentzianFit,
    /// FWHM of the noiseless model peak, Hz.
    pub model_fwhm: f64,
    pub occupation_true: f64,
    pub occupation_fit: f64,
}

/// Generates the spectrum at occupation `n`, adds seeded noise and fits it.
/// The fitted area is converted to an occupation with the Lorentzian-area
/// factor from the spectrum metadata.
pub fn noise_pipeline(p: &DeviceParams, n: f64, rng: &mut ChaCha8Rng) -> Result<PipelineResult, crate::ComponentError> {
    let net = LinearModeNetwork::at_operating_point(p)?;
    let (center, model_fwhm) = peak_shape(&net)?;
    let bath = ThermalBath::with_occupation(n, p.saw.omega)?;
    let half = TRACE_SPAN_WIDTHS * model_fwhm;
    let grid: Vec<f64> =
        (0..TRACE_POINTS).map(|k| center - half + 2.0 * half * k as f64 / (TRACE_POINTS - 1) as f64).collect();
    let psd = upconverted_psd(p, &net, &bath, &grid)?;
    let peak = psd.values.iter().zip(&psd.background).map(|(v, b)| v - b).fold(0.0, f64::max);
    let normal = Normal::new(0.0, RELATIVE_NOISE * peak).map_err(|e| ComponentError::Other(e.to_string()))?;
    let noisy: Vec<f64> = psd.values.iter().map(|v| v + normal.sample(rng)).collect();
    let fit = fit_lorentzian(&psd.offsets_hz, &noisy, None)?;
    let factor = psd.metadata.lorentzian_factor.expect("set by upconverted_psd");
    let occupation_fit = fit.area / factor;
    Ok(PipelineResult { psd, noisy, fit, model_fwhm, occupation_true: n, occupation_fit })
}

fn table(r: &PipelineResult, gain: f64) -> String {
    let mut s = String::from("offset_hz,psd,psd_noisy,background,fit,amplified\n");
    for k in 0..r.psd.len() {
        let x = r.psd.offsets_hz[k];
        let row = [x, r.psd.values[k], r.noisy[k], r.psd.background[k], r.fit.evaluate(x), gain * r.noisy[k]];
        s.push_str(&row.map(sci).join(","));
        s.push('\n');
    }
    s
}

pub(super) fn run(p: &DeviceParams, rng: &mut ChaCha8Rng) -> Result<Outcome, ComponentError> {
    let mut out = Outcome::default();
    let chain = AmplifierChain::new(p.noise.amplifiers.clone(), 0.0);
    for (t, quoted, tol) in [(p.noise.t_eff_low, 0.57, 0.02), (p.noise.t_eff_high, 1.8, 0.2)] {
        let label = format!("{:.0}mK", t * 1e3);
        let n = bose_einstein(p.saw.omega, t);
        let r = noise_pipeline(p, n, rng)?;
        out.checks.push(Check::new(format!("occupation at {label}, fitted"), quoted, r.occupation_fit, Tolerance::Absolute(tol)));
        out.checks.push(Check::new(format!("occupation at {label}, generator"), quoted, n, Tolerance::Absolute(tol)));
        out.checks.push(Check::new(format!("peak FWHM at {label} (Hz)"), r.model_fwhm, r.fit.fwhm, Tolerance::Relative(0.02)));
        out.checks.push(Check::new(format!("peak FWHM / SAW linewidth at {label}"), 1.0, r.fit.fwhm / p.saw.linewidth_total, Tolerance::Info));
        out.files.push((format!("fig4_psd_{label}.csv"), table(&r, chain.total_gain())));
        let amplified = apply_chain(&r.psd, &chain);
        let sidecar = serde_json::json!({
            "bath": r.psd.metadata.bath,
            "occupation": n,
            "conversion_factor": r.psd.metadata.conversion_factor,
            "lorentzian_factor": r.psd.metadata.lorentzian_factor,
            "stages": amplified.metadata.stages,
            "total_gain": amplified.metadata.total_gain,
            "fit": r.fit.report(),
        });
        out.files.push((format!("fig4_psd_{label}.json"), serde_json::to_string_pretty(&sidecar).expect("json") + "\n"));
    }
    let net = LinearModeNetwork::at_operating_point(p)?;
    let x_zpf = coupling_from_geometry(&p.geometry)?.x_zpf;
    let sens = displacement_sensitivity(x_zpf, p.noise.floor, sensitivity_conversion(&net)?)?;
    out.checks.push(Check::new("displacement sensitivity (m/sqrt(Hz))", 0.2e-18, sens, Tolerance::Relative(0.05)));
    out.checks.push(Check::new("zero-point displacement (m)", 7e-18, x_zpf, Tolerance::Relative(0.05)));
    let n_bath = bose_einstein(p.saw.omega, p.noise.t_bath_low);
    out.checks.push(Check::new("occupation at the low bath temperature", 1e-3, n_bath, Tolerance::Info));
    out.notes.push("the fitted occupation divides the Lorentzian area by the Lorentzian-area factor of the model peak".into());
    Ok(out)
}
