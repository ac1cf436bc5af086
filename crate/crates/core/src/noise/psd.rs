use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{NoiseError, Result, ThermalBath};

/// Provenance of a spectrum.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PsdMetadata {
    /// Amplifier stages applied, in order, `(name, gain dB)`.
    pub stages: Vec<(String, f64)>,
    /// Product of all stage gains (linear).
    pub total_gain: f64,
    /// Floor added after amplification, per stage application.
    pub floor_added: f64,
    pub bath: Option<ThermalBath>,
    pub occupation: Option<f64>,
    /// Peak area per unit SAW occupation before amplification, quanta/s.
    pub conversion_factor: Option<f64>,
    /// Area of the Lorentzian with the peak's height and half-maximum width
    /// per unit occupation, quanta/s. This is what a Lorentzian fit measures.
    pub lorentzian_factor: Option<f64>,
}

/// Sampled spectrum on a strictly increasing offset grid (Hz from the MW
/// resonance).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoisePsd {
    pub offsets_hz: Vec<f64>,
    pub values: Vec<f64>,
    pub background: Vec<f64>,
    pub metadata: PsdMetadata,
}

impl NoisePsd {
    pub fn new(offsets_hz: Vec<f64>, values: Vec<f64>, background: Vec<f64>) -> Result<Self> {
        if offsets_hz.len() != values.len() || values.len() != background.len() {
            return Err(NoiseError::InvalidSpectrum("grid, values and background differ in length".into()));
        }
        if offsets_hz.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(NoiseError::InvalidSpectrum("offset grid is not strictly increasing".into()));
        }
        if values.iter().chain(&background).any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(NoiseError::InvalidSpectrum("values must be finite and non-negative".into()));
        }
        Ok(Self { offsets_hz, values, background, metadata: PsdMetadata { total_gain: 1.0, ..Default::default() } })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Trapezoidal integral of `values − background`.
    pub fn excess_area(&self) -> f64 {
        self.offsets_hz
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let a = self.values[i] - self.background[i];
                let b = self.values[i + 1] - self.background[i + 1];
                0.5 * (a + b) * (w[1] - w[0])
            })
            .sum()
    }

    /// CSV with columns `offset_hz,psd,background`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("offset_hz,psd,background\n");
        for i in 0..self.len() {
            let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", self.offsets_hz[i], self.values[i], self.background[i]);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(NoisePsd::new(vec![0.0, 1.0], vec![1.0, 1.0], vec![0.0, 0.0]).is_ok());
        assert!(NoisePsd::new(vec![1.0, 1.0], vec![1.0, 1.0], vec![0.0, 0.0]).is_err());
        assert!(NoisePsd::new(vec![0.0, 1.0], vec![-1.0, 1.0], vec![0.0, 0.0]).is_err());
        assert!(NoisePsd::new(vec![0.0], vec![1.0, 1.0], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn area_of_box() {
        let psd = NoisePsd::new(vec![0.0, 1.0, 2.0], vec![3.0, 3.0, 3.0], vec![1.0, 1.0, 1.0]).unwrap();
        assert!((psd.excess_area() - 4.0).abs() < 1e-15);
    }
}
