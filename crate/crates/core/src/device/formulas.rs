use super::{check_denominator, params::TransmonParams, Result};

/// Asymptotic transmon estimates `ω_e ≈ √(8 E_J E_C) − E_C`, `α ≈ −E_C`.
/// Both energies must be positive.
pub fn transmon_levels(e_j: f64, e_c: f64) -> (f64, f64) {
    debug_assert!(e_j > 0.0 && e_c > 0.0);
    ((8.0 * e_j * e_c).sqrt() - e_c, -e_c)
}

/// Dispersive shift `χ = g² / (ω_e − ω_res)`, signed.
pub fn dispersive_shift(g: f64, omega_e: f64, omega_res: f64) -> Result<f64> {
    let den = check_denominator(omega_e - omega_res, omega_e, "dispersive shift")?;
    Ok(g * g / den)
}

/// Inverse of [`dispersive_shift`] for the coupling magnitude.
pub fn coupling_from_dispersive_shift(chi: f64, omega_e: f64, omega_res: f64) -> Result<f64> {
    let den = check_denominator(omega_e - omega_res, omega_e, "dispersive shift")?;
    let g2 = chi * den;
    if g2 < 0.0 {
        return Err(super::invalid("chi", "sign inconsistent with the detuning"));
    }
    Ok(g2.sqrt())
}

/// Qubit Stark shift per resonator quantum, `χ_q = 2χα / (ω_res − ω_e − α)`.
pub fn stark_per_quantum(chi: f64, alpha: f64, omega_res: f64, omega_e: f64) -> Result<f64> {
    let den = check_denominator(omega_res - omega_e - alpha, omega_res, "Stark per quantum")?;
    Ok(2.0 * chi * alpha / den)
}

/// Intra-resonator quanta implied by a measured qubit Stark shift.
pub fn quanta_from_stark_shift(shift: f64, chi_q: f64) -> Result<f64> {
    check_denominator(chi_q, 1.0, "Stark calibration")?;
    Ok(shift / chi_q)
}

/// Drive-induced coupling between a resonator and the g–f transition,
/// `g_p = g α Ω / (√2 (ω_e − ω_res)(ω_e + α − ω_res))`.
///
/// The drive is `Ω cos(ω_d t)(b + b†)`. Outside `|Ω| < |ω_e − ω_res|` and
/// `|Ω| < |ω_e + α − ω_res|` the result is logged as non-perturbative but
/// still returned.
pub fn parametric_coupling(g: f64, alpha: f64, omega_e: f64, omega_res: f64, drive_amp: f64) -> Result<f64> {
    let d1 = check_denominator(omega_e - omega_res, omega_e, "parametric coupling")?;
    let d2 = check_denominator(omega_e + alpha - omega_res, omega_e, "parametric coupling")?;
    if drive_amp.abs() >= d1.abs() || drive_amp.abs() >= d2.abs() {
        log::warn!("drive amplitude {drive_amp:.3e} Hz is outside the perturbative range");
    }
    Ok(g * alpha * drive_amp / (std::f64::consts::SQRT_2 * d1 * d2))
}

/// Frequencies of the two conversion drives for a single-photon detuning
/// `δ = ω_d1 − ω_m + ω_f`, keeping `ω_s + ω_d1 + ω_d2 − ω_m = 0`.
pub fn parametric_drive_frequencies(t: &TransmonParams, omega_mw: f64, omega_saw: f64, detuning: f64) -> (f64, f64) {
    (omega_mw - t.omega_f + detuning, t.omega_f - omega_saw - detuning)
}

/// Second-order frequency pull of a resonator per quantum when the qubit sits
/// in `level` (0 = g, 1 = e, 2 = f), including the √2 e–f matrix element.
/// `resonator_pull(g, 1, ..) − resonator_pull(g, 0, ..)` is the usual `2χ`
/// for a two-level qubit only when the f-level terms are negligible.
pub fn resonator_pull(g: f64, level: usize, t: &TransmonParams, omega_res: f64) -> Result<f64> {
    let g2 = g * g;
    let ge = |x: f64| check_denominator(x, omega_res, "resonator pull");
    match level {
        0 => Ok(g2 / ge(omega_res - t.omega_e)?),
        1 => Ok(g2 / ge(t.omega_e - omega_res)? + 2.0 * g2 / ge(omega_res - t.omega_fe())?),
        2 => Ok(2.0 * g2 / ge(t.omega_fe() - omega_res)?),
        _ => Err(super::invalid("level", "only g, e and f are modeled")),
    }
}
