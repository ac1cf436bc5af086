use serde::{Deserialize, Serialize};

use super::NoisePsd;
use crate::units::db_to_linear;

/// Ordered gain stages plus an additive floor referred to the chain output.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AmplifierChain {
    pub stages: Vec<(String, f64)>,
    pub noise_floor: f64,
}

impl AmplifierChain {
    pub fn new(stages: Vec<(String, f64)>, noise_floor: f64) -> Self {
        assert!(stages.iter().all(|(_, g)| g.is_finite()), "gains must be finite");
        assert!(noise_floor >= 0.0, "floor must be non-negative");
        Self { stages, noise_floor }
    }

    pub fn total_gain(&self) -> f64 {
        db_to_linear(self.stages.iter().map(|(_, g)| g).sum())
    }
}

/// `G·S + floor` on both the spectrum and its background.
pub fn apply_chain(psd: &NoisePsd, chain: &AmplifierChain) -> NoisePsd {
    let g = chain.total_gain();
    let map = |v: &Vec<f64>| v.iter().map(|x| g * x + chain.noise_floor).collect::<Vec<_>>();
    let mut out = psd.clone();
    out.values = map(&psd.values);
    out.background = map(&psd.background);
    out.metadata.stages.extend(chain.stages.iter().cloned());
    out.metadata.total_gain *= g;
    out.metadata.floor_added += chain.noise_floor;
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn psd() -> NoisePsd {
        NoisePsd::new(vec![-1.0, 0.0, 1.0], vec![1.0, 5.0, 1.0], vec![1.0, 1.0, 1.0]).unwrap()
    }

    #[test]
    fn empty_chain_is_identity() {
        let out = apply_chain(&psd(), &AmplifierChain::default());
        assert_eq!(out.values, psd().values);
        assert_eq!(out.background, psd().background);
    }

    #[test]
    fn two_stage_gain() {
        let chain = AmplifierChain::new(vec![("jpa".into(), 22.0), ("twpa".into(), 14.0)], 0.0);
        let out = apply_chain(&psd(), &chain);
        assert!((out.values[1] / 5.0 - 10f64.powf(3.6)).abs() < 1e-9);
        assert_eq!(out.metadata.stages.len(), 2);
    }

    #[test]
    fn floor_is_an_offset() {
        let out = apply_chain(&psd(), &AmplifierChain::new(vec![], 2.5));
        for (a, b) in out.values.iter().zip(&psd().values) {
            assert_eq!(a - b, 2.5);
        }
    }
}
