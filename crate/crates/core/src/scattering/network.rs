use nalgebra::{Matrix2, Matrix3};
use serde::{Deserialize, Serialize};

use super::{Result, ScatteringError};
use crate::device::{parametric_coupling, DeviceParams, Detunings};
use crate::quantum::C64;

/// Three modes (MW, qubit g–f, SAW) in a tridiagonal chain. Rates are total
/// damping rates; `external` holds the measured-port rate per mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearModeNetwork {
    detunings: [f64; 3],
    rates: [f64; 3],
    external: [f64; 3],
    couplings: [f64; 2],
}

pub const MW: usize = 0;
pub const QUBIT: usize = 1;
pub const SAW: usize = 2;

impl LinearModeNetwork {
    /// `external` has no qubit entry: the transition has no port.
    pub fn new(detunings: Detunings, rates: [f64; 3], external: [f64; 2], couplings: [f64; 2]) -> Result<Self> {
        let external = [external[0], 0.0, external[1]];
        for k in 0..3 {
            if !(rates[k] >= 0.0) || !rates[k].is_finite() {
                return Err(ScatteringError::InvalidNetwork(format!("rate {k} must be non-negative")));
            }
            if !(external[k] >= 0.0 && external[k] <= rates[k]) {
                return Err(ScatteringError::InvalidNetwork(format!(
                    "external rate of mode {k} exceeds its total rate"
                )));
            }
        }
        if couplings.iter().any(|g| !g.is_finite()) {
            return Err(ScatteringError::InvalidNetwork("non-finite coupling".into()));
        }
        Ok(Self { detunings: [detunings.mw, detunings.f, detunings.saw], rates, external, couplings })
    }

    /// Network for parametric couplings `g_pm`, `g_ps` with the device's
    /// rates. The SAW port is the input IDT.
    pub fn from_device(p: &DeviceParams, g_pm: f64, g_ps: f64, det: Detunings) -> Result<Self> {
        Self::new(
            det,
            [p.mw.linewidth_total, p.transmon.kappa_f, p.saw.linewidth_total],
            [p.mw.linewidth_external, p.saw.linewidth_external],
            [g_pm, g_ps],
        )
    }

    /// Network at the configured drive amplitudes, with the configured
    /// effective `Δ_f` and both resonators on two-photon resonance.
    pub fn at_operating_point(p: &DeviceParams) -> Result<Self> {
        let (g_pm, g_ps) = operating_couplings(p)?;
        let det = Detunings { mw: 0.0, f: p.drive.detuning, saw: 0.0 };
        Self::from_device(p, g_pm, g_ps, det)
    }

    pub fn detunings(&self) -> Detunings {
        Detunings { mw: self.detunings[MW], f: self.detunings[QUBIT], saw: self.detunings[SAW] }
    }

    pub fn with_detunings(mut self, det: Detunings) -> Self {
        self.detunings = [det.mw, det.f, det.saw];
        self
    }

    pub fn rates(&self) -> [f64; 3] {
        self.rates
    }

    pub fn external(&self) -> [f64; 3] {
        self.external
    }

    pub fn couplings(&self) -> [f64; 2] {
        self.couplings
    }

    /// `(C_m, C_s)`.
    pub fn cooperativities(&self) -> Result<(f64, f64)> {
        Ok((
            cooperativity(self.couplings[0], self.rates[MW], self.rates[QUBIT])?,
            cooperativity(self.couplings[1], self.rates[SAW], self.rates[QUBIT])?,
        ))
    }

    /// `(η_m, η_s)`: external over total rate of each resonator.
    pub fn coupling_factors(&self) -> (f64, f64) {
        (self.external[MW] / self.rates[MW], self.external[SAW] / self.rates[SAW])
    }

    /// Complex mode matrix `M`, Hz.
    pub fn mode_matrix(&self) -> Matrix3<C64> {
        let mut m = Matrix3::zeros();
        for k in 0..3 {
            m[(k, k)] = C64::new(self.detunings[k], -0.5 * self.rates[k]);
        }
        m[(0, 1)] = C64::new(self.couplings[0], 0.0);
        m[(1, 0)] = m[(0, 1)];
        m[(1, 2)] = C64::new(self.couplings[1], 0.0);
        m[(2, 1)] = m[(1, 2)];
        m
    }

    /// Resolvent `(ωI − M)⁻¹` at probe offset `offset` (Hz).
    pub fn response(&self, offset: f64) -> Result<Matrix3<C64>> {
        let a = Matrix3::from_diagonal_element(C64::new(offset, 0.0)) - self.mode_matrix();
        a.try_inverse().ok_or(ScatteringError::Singular(offset))
    }

    /// Two-port scattering matrix, ports (MW, SAW).
    pub fn s_matrix(&self, offset: f64) -> Result<Matrix2<C64>> {
        let g = self.response(offset)?;
        let k = [self.external[MW].sqrt(), self.external[SAW].sqrt()];
        let idx = [MW, SAW];
        let mut s = Matrix2::identity();
        for r in 0..2 {
            for c in 0..2 {
                s[(r, c)] -= C64::i() * k[r] * k[c] * g[(idx[r], idx[c])];
            }
        }
        Ok(s)
    }

    /// Power conversion efficiency SAW → MW, `|S_MW,SAW|²`.
    pub fn conversion_efficiency(&self, offset: f64) -> Result<f64> {
        Ok(self.s_matrix(offset)?[(0, 1)].norm_sqr())
    }
}

/// Parametric couplings at the configured drive amplitudes, `(g_p,m, g_p,s)`.
pub(crate) fn operating_couplings(p: &DeviceParams) -> Result<(f64, f64)> {
    couplings_at(p, p.drive.amplitude_mw, p.drive.amplitude_saw)
}

pub(crate) fn couplings_at(p: &DeviceParams, omega1: f64, omega2: f64) -> Result<(f64, f64)> {
    let t = &p.transmon;
    let g_pm = parametric_coupling(p.coupling.g_mw, t.alpha(), t.omega_e, p.mw.omega, omega1)?;
    let g_ps = parametric_coupling(p.coupling.g_saw, t.alpha(), t.omega_e, p.saw.omega, omega2)?;
    Ok((g_pm, g_ps))
}

/// Cooperativity `C = 4 g_p² / (rate · κ_f)`.
pub fn cooperativity(g_p: f64, mode_rate: f64, kappa_f: f64) -> Result<f64> {
    if !(mode_rate > 0.0) {
        return Err(ScatteringError::ZeroRate("mode rate"));
    }
    if !(kappa_f > 0.0) {
        return Err(ScatteringError::ZeroRate("kappa_f"));
    }
    Ok(4.0 * g_p * g_p / (mode_rate * kappa_f))
}

/// On-resonance efficiency `η_m η_s · 4 C_m C_s / (1 + C_m + C_s)²`.
pub fn efficiency_on_resonance(c_m: f64, c_s: f64, eta_m: f64, eta_s: f64) -> f64 {
    eta_m * eta_s * 4.0 * c_m * c_s / (1.0 + c_m + c_s).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn net(g: [f64; 2], ext: [f64; 2]) -> LinearModeNetwork {
        LinearModeNetwork::new(Detunings::default(), [716e3, 18e6, 36.6e3], ext, g).unwrap()
    }

    #[test]
    fn critical_coupling_has_no_reflection() {
        let n = net([0.0, 0.0], [358e3, 60.0]);
        let s = n.s_matrix(0.0).unwrap();
        assert!(s[(0, 0)].norm() < 1e-15);
        assert_eq!(s[(0, 1)].norm(), 0.0);
        let n = net([0.0, 0.0], [152e3, 60.0]);
        let s11 = n.s_matrix(0.0).unwrap()[(0, 0)];
        assert!((s11.re - (716e3 - 2.0 * 152e3) / 716e3).abs() < 1e-14);
    }

    #[test]
    fn resonant_conversion_matches_closed_form() {
        let n = net([1.6616e6, 0.36729e6], [152e3, 60.0]);
        let (cm, cs) = n.cooperativities().unwrap();
        let (em, es) = n.coupling_factors();
        let eta = n.conversion_efficiency(0.0).unwrap();
        let closed = efficiency_on_resonance(cm, cs, em, es);
        assert!((eta - closed).abs() / closed < 1e-12);
    }

    #[test]
    fn cooperativity_values() {
        assert!((cooperativity(0.367e6, 36.6e3, 18e6).unwrap() - 0.8179).abs() < 1e-3);
        assert!((cooperativity(1.66e6, 716e3, 18e6).unwrap() - 0.855).abs() < 1e-3);
        assert_eq!(cooperativity(0.0, 1.0, 1.0).unwrap(), 0.0);
        assert!(cooperativity(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn peak_factor() {
        assert!((efficiency_on_resonance(0.82, 0.82, 1.0, 1.0) - 0.38594).abs() < 1e-4);
        assert_eq!(efficiency_on_resonance(0.0, 2.0, 1.0, 1.0), 0.0);
    }

    #[test]
    fn invalid_networks() {
        assert!(LinearModeNetwork::new(Detunings::default(), [1.0, 1.0, 1.0], [2.0, 0.0], [0.0, 0.0]).is_err());
        assert!(LinearModeNetwork::new(Detunings::default(), [-1.0, 1.0, 1.0], [0.0, 0.0], [0.0, 0.0]).is_err());
        let undamped = LinearModeNetwork::new(Detunings::default(), [0.0; 3], [0.0, 0.0], [1.0, 1.0]).unwrap();
        assert!(undamped.s_matrix(0.0).is_err());
    }
}
