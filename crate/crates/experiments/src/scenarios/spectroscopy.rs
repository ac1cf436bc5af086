//! Parametric spectroscopy of the `|f, n⟩ ↔ |g, n+1⟩` SAW sideband: sweep
//! the second drive, read the qubit population through the dispersively
//! shifted MW reflection.

use saw_transducer::device::{
    parametric_coupling, parametric_open_system, resonator_pull, stark_coefficients, DeviceParams, Detunings,
    OpenSystemOptions,
};
use saw_transducer::fitting::{fit_lorentzian, reflection_model};
use saw_transducer::quantum::{steady_state, HilbertConfig};

use super::{csv, Check, Outcome, Tolerance};
use crate::ComponentError;

/// Mean intra-resonator SAW phonon number of the weak probe tone.
const PROBE_PHONONS: f64 = 0.05;

#[derive(Debug, Clone)]
pub struct SpectroscopyTrace {
    /// `Ω/2π` of the swept drive, Hz.
    pub amplitude: f64,
    pub drive_freq: Vec<f64>,
    pub population_f: Vec<f64>,
    /// Change of `|S₁₁|²` at the qubit-in-`|g⟩` MW resonance.
    pub signal: Vec<f64>,
    /// `|ω_f − ω_s| + Δ_f(Ω)`.
    pub predicted_center: f64,
}

/// Steady-state response at each drive frequency in `drive_freq`.
pub fn spectroscopy_trace(p: &DeviceParams, amplitude: f64, drive_freq: &[f64]) -> Result<SpectroscopyTrace, ComponentError> {
    let t = &p.transmon;
    let cfg = HilbertConfig::new(2, 3, 3)?;
    let g_ps = parametric_coupling(p.coupling.g_saw, t.alpha(), t.omega_e, p.saw.omega, amplitude)?;
    let stark = stark_coefficients(p, 0.0)?[1] * amplitude * amplitude;
    let bare = t.omega_f - p.saw.omega;
    let opts = OpenSystemOptions { saw_drive: PROBE_PHONONS.sqrt() * p.saw.linewidth_total / 2.0, saw_occupation: 0.0 };
    let pull = |k| resonator_pull(p.coupling.g_mw, k, t, p.mw.omega);
    let pulls = [pull(0)?, pull(1)?, pull(2)?];
    let probe = p.mw.omega + pulls[0];
    let reflect = |k: usize| reflection_model(probe, p.mw.omega + pulls[k], p.mw.linewidth_total, p.mw.linewidth_external).norm_sqr();
    let base = reflect(0);
    let mut population_f = Vec::with_capacity(drive_freq.len());
    let mut signal = Vec::with_capacity(drive_freq.len());
    for &f in drive_freq {
        let det = Detunings { mw: 0.0, f: bare + stark - f, saw: 0.0 };
        let l = parametric_open_system(p, 0.0, g_ps, det, cfg, opts)?;
        let rho = steady_state(&l)?;
        let mut pops = [0.0; 3];
        for i in 0..cfg.dim() {
            pops[cfg.decompose(i).1] += rho.population(i);
        }
        population_f.push(pops[2]);
        signal.push((0..3).map(|k| pops[k] * (reflect(k) - base)).sum());
    }
    Ok(SpectroscopyTrace {
        amplitude,
        drive_freq: drive_freq.to_vec(),
        population_f,
        signal,
        predicted_center: bare + stark,
    })
}

pub(super) fn run(p: &DeviceParams) -> Result<Outcome, ComponentError> {
    let mut out = Outcome::default();
    let kappa = p.transmon.kappa_f;
    let mut rows = Vec::new();
    let mut widths = Vec::new();
    for frac in [0.0, 0.25, 0.5, 1.0] {
        let amplitude = frac * p.drive.amplitude_saw;
        let stark = stark_coefficients(p, 0.0)?[1] * amplitude * amplitude;
        let center = p.transmon.omega_f - p.saw.omega + stark;
        let freqs: Vec<f64> = (0..=80).map(|k| center + kappa * (k as f64 - 40.0) / 10.0).collect();
        let tr = spectroscopy_trace(p, amplitude, &freqs)?;
        for k in 0..freqs.len() {
            rows.push(vec![amplitude, freqs[k], freqs[k] - (p.transmon.omega_f - p.saw.omega), tr.population_f[k], tr.signal[k]]);
        }
        let label = format!("{:.0} MHz drive", amplitude / 1e6);
        if amplitude == 0.0 {
            let spread = tr.signal.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            out.checks.push(Check::new(format!("signal excursion, {label}"), 0.0, spread, Tolerance::Absolute(1e-12)));
            continue;
        }
        let fit = fit_lorentzian(&freqs, &tr.signal, None)?;
        out.checks.push(Check::new(
            format!("resonance center, {label} (Hz)"),
            tr.predicted_center,
            fit.center,
            Tolerance::Absolute(0.01 * fit.fwhm),
        ));
        out.checks.push(Check::new(format!("resonance FWHM, {label} (Hz)"), kappa, fit.fwhm, Tolerance::Info));
        widths.push(fit.fwhm);
    }
    let broadening = widths.windows(2).all(|w| w[1] > w[0]);
    out.checks.push(Check::new("width grows with drive amplitude", 1.0, f64::from(u8::from(broadening)), Tolerance::Absolute(0.0)));
    out.files.push((
        "figS3_spectroscopy.csv".into(),
        csv("amplitude_hz,drive_freq_hz,offset_from_bare_hz,population_f,signal", rows),
    ));
    Ok(out)
}
