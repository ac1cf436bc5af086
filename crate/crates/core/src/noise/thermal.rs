use serde::{Deserialize, Serialize};

use super::{NoiseError, Result};
use crate::units::{BOLTZMANN, PLANCK};

/// Mean Bose–Einstein occupation `1/(exp(hν/k_BT) − 1)`; zero at `T = 0`.
pub fn bose_einstein(omega: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    1.0 / (PLANCK * omega / (BOLTZMANN * t)).exp_m1()
}

/// Temperature with occupation `n` at frequency `omega`:
/// `T = hν / (k_B ln(1 + 1/n))`.
pub fn effective_temperature(n: f64, omega: f64) -> Result<f64> {
    if !(n > 0.0) {
        return Err(NoiseError::NonPositiveOccupation(n));
    }
    Ok(PLANCK * omega / (BOLTZMANN * (1.0 / n).ln_1p()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalBath {
    pub temperature: f64,
    pub mode_frequency: f64,
}

impl ThermalBath {
    pub fn new(temperature: f64, mode_frequency: f64) -> Self {
        assert!(temperature >= 0.0, "temperature must be non-negative");
        Self { temperature, mode_frequency }
    }

    /// Bath whose mode has occupation `n`.
    pub fn with_occupation(n: f64, mode_frequency: f64) -> Result<Self> {
        Ok(Self { temperature: effective_temperature(n, mode_frequency)?, mode_frequency })
    }

    pub fn occupation(&self) -> f64 {
        bose_einstein(self.mode_frequency, self.temperature)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saw_mode_occupations() {
        let n37 = bose_einstein(781e6, 37e-3);
        assert!((n37 - 0.5701).abs() < 1e-4, "{n37}");
        let n85 = bose_einstein(781e6, 85e-3);
        assert!((n85 - 1.8043).abs() < 1e-4, "{n85}");
        assert_eq!(bose_einstein(781e6, 0.0), 0.0);
        let n10 = bose_einstein(781e6, 10e-3);
        assert!((n10 - 0.0241).abs() < 1e-4);
    }

    #[test]
    fn inverse_map() {
        let t = effective_temperature(0.57, 781e6).unwrap();
        assert!((t - 36.99e-3).abs() < 0.01e-3);
        let t = effective_temperature(1.8, 781e6).unwrap();
        assert!((t - 84.83e-3).abs() < 0.01e-3);
        for &n in &[1e-3, 0.57, 1.8, 40.0] {
            let back = bose_einstein(781e6, effective_temperature(n, 781e6).unwrap());
            assert!((back - n).abs() <= 1e-12 * n);
        }
        assert!(effective_temperature(0.0, 781e6).is_err());
    }

    #[test]
    fn bath_occupation() {
        let b = ThermalBath::with_occupation(0.57, 781e6).unwrap();
        assert!((b.occupation() - 0.57).abs() < 1e-12);
    }
}
