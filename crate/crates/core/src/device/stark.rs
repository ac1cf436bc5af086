//! Drive-induced AC Stark shift of `|f⟩` relative to `|g⟩`.
//!
//! A tone `Ω cos(ω_d t)(b + b†)` on the three-level ladder with matrix
//! elements `⟨e|b†|g⟩ = 1`, `⟨f|b†|e⟩ = √2` shifts each level, including the
//! counter-rotating terms, by
//!
//! ```text
//! δE_g = (Ω²/4) [1/(ω_d − ω_e) − 1/(ω_d + ω_e)]
//! δE_f = (Ω²/2) [1/(ω_fe − ω_d) + 1/(ω_fe + ω_d)]
//! ```
//!
//! so `Δ_f = s Ω²` with `s = (δE_f − δE_g)/Ω²`. Both drives add, and a
//! contour of constant `Δ_f` is a straight line in the drive powers.

use super::{check_denominator, params::*, Result};

/// Coefficient `s` in `Δ_f = s Ω²` (units 1/Hz) for a drive at `drive_freq`.
pub fn stark_coefficient(drive_freq: f64, t: &TransmonParams) -> Result<f64> {
    let scale = t.omega_f;
    let den = |x: f64| check_denominator(x, scale, "Stark shift");
    let shift_g = 0.25 * (1.0 / den(drive_freq - t.omega_e)? - 1.0 / den(drive_freq + t.omega_e)?);
    let shift_f = 0.5 * (1.0 / den(t.omega_fe() - drive_freq)? + 1.0 / den(t.omega_fe() + drive_freq)?);
    Ok(shift_f - shift_g)
}

/// `(s₁, s₂)` for the two conversion drives at single-photon detuning
/// `detuning`, honoring a configured override.
pub fn stark_coefficients(p: &DeviceParams, detuning: f64) -> Result<[f64; 2]> {
    if let Some(s) = p.drive.stark_override {
        return Ok(s);
    }
    let (f1, f2) = super::parametric_drive_frequencies(&p.transmon, p.mw.omega, p.saw.omega, detuning);
    Ok([stark_coefficient(f1, &p.transmon)?, stark_coefficient(f2, &p.transmon)?])
}

/// `Δ_f = s₁Ω₁² + s₂Ω₂²` for two tones, using configured coefficients when
/// present and the perturbative values at each tone's frequency otherwise.
pub fn stark_shift_of_f(drive1: &DriveTone, drive2: &DriveTone, p: &DeviceParams) -> Result<f64> {
    let [s1, s2] = match p.drive.stark_override {
        Some(s) => s,
        None => [
            stark_coefficient(drive1.frequency, &p.transmon)?,
            stark_coefficient(drive2.frequency, &p.transmon)?,
        ],
    };
    Ok(s1 * drive1.amplitude.powi(2) + s2 * drive2.amplitude.powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MHZ: f64 = 1e6;

    fn transmon() -> TransmonParams {
        TransmonParams::new(230.0 * MHZ, 4100.0 * MHZ, 2530.0 * MHZ, 4830.0 * MHZ, 18.0 * MHZ).unwrap()
    }

    #[test]
    fn coefficient_matches_hand_evaluation() {
        let t = transmon();
        let s1 = stark_coefficient(220.0 * MHZ, &t).unwrap() * MHZ;
        let g = 0.25 * (1.0 / (220.0 - 2530.0) - 1.0 / (220.0 + 2530.0));
        let f = 0.5 * (1.0 / (2300.0 - 220.0) + 1.0 / (2300.0 + 220.0));
        assert!((s1 - (f - g)).abs() < 1e-15);
        let s2 = stark_coefficient(4049.0 * MHZ, &t).unwrap() * MHZ;
        assert!(s1 > 0.0 && s2 < 0.0);
    }

    #[test]
    fn resonant_drive_rejected() {
        let t = transmon();
        assert!(stark_coefficient(2530.0 * MHZ, &t).is_err());
        assert!(stark_coefficient(2300.0 * MHZ, &t).is_err());
    }
}
