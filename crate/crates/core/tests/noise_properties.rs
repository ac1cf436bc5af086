use proptest::prelude::*;
use saw_transducer::device::{coupling_from_geometry, parse_config, DeviceParams};
use saw_transducer::fitting::fit_lorentzian;
use saw_transducer::noise::{
    apply_chain, bose_einstein, conversion_bandwidth_factor, displacement_sensitivity, effective_temperature, peak_shape,
    sensitivity_conversion, upconverted_psd, AmplifierChain, NoisePsd, ThermalBath,
};
use saw_transducer::scattering::LinearModeNetwork;
use saw_transducer::units::{BOLTZMANN, PLANCK};

fn reference() -> DeviceParams {
    parse_config(include_str!("../../../device_reference.cfg")).unwrap()
}

proptest! {
    #[test]
    fn occupation_monotone(f in 1e8f64..1e10, t in 1e-3f64..1.0, k in 1.001f64..3.0) {
        prop_assert!(bose_einstein(f, k * t) > bose_einstein(f, t));
        let (lo, hi) = (bose_einstein(f, t), bose_einstein(k * f, t));
        prop_assert!(hi < lo || (lo == 0.0 && hi == 0.0));
    }

    #[test]
    fn temperature_round_trip(n in 1e-3f64..100.0, f in 1e8f64..1e10) {
        let t = effective_temperature(n, f).unwrap();
        prop_assert!((bose_einstein(f, t) / n - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classical_limit(ratio in 20.0f64..1e4) {
        // n̄ + ½ → k_BT/hν; n̄ alone is within 1% once the ratio exceeds 50
        let f = 781e6;
        let t = ratio * PLANCK * f / BOLTZMANN;
        let n = bose_einstein(f, t);
        prop_assert!(((n + 0.5) / ratio - 1.0).abs() < 1e-3);
        if ratio > 50.0 {
            prop_assert!((n / ratio - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn chain_is_affine(
        a in prop::collection::vec(0.0f64..10.0, 8),
        b in prop::collection::vec(0.0f64..10.0, 8),
        alpha in 0.0f64..5.0,
        g1 in -10.0f64..30.0,
        g2 in -10.0f64..30.0,
        floor in 0.0f64..3.0,
    ) {
        let x: Vec<f64> = (0..8).map(f64::from).collect();
        let mk = |v: Vec<f64>| NoisePsd::new(x.clone(), v, vec![0.0; 8]).unwrap();
        let chain = AmplifierChain::new(vec![("a".into(), g1), ("b".into(), g2)], floor);
        let mixed: Vec<f64> = a.iter().zip(&b).map(|(p, q)| alpha * p + q).collect();
        let lhs = apply_chain(&mk(mixed), &chain);
        let (sa, sb) = (apply_chain(&mk(a), &chain), apply_chain(&mk(b), &chain));
        for k in 0..8 {
            let rhs = alpha * (sa.values[k] - floor) + (sb.values[k] - floor);
            prop_assert!((lhs.values[k] - floor - rhs).abs() <= 1e-9 * rhs.abs().max(1.0));
        }
    }
}

#[test]
fn reference_occupations() {
    let f = 781e6;
    assert!((bose_einstein(f, 0.037) - 0.570).abs() < 2e-3);
    assert!((bose_einstein(f, 0.085) - 1.80).abs() < 0.01);
    assert_eq!(bose_einstein(f, 0.0), 0.0);
    assert!((bose_einstein(f, 0.010) - 0.024).abs() < 1e-3);
    assert!((effective_temperature(0.57, f).unwrap() - 0.0369).abs() < 2e-4);
    assert!((effective_temperature(1.8, f).unwrap() - 0.0848).abs() < 2e-4);
    assert!(effective_temperature(0.0, f).is_err());
    let chain = AmplifierChain::new(vec![("jpa".into(), 22.0), ("twpa".into(), 14.0)], 0.0);
    assert!((chain.total_gain() / 10f64.powf(3.6) - 1.0).abs() < 1e-12);
}

fn grid(width: f64, span: f64, n: i32) -> Vec<f64> {
    (-n..=n).map(|k| k as f64 * span * width / n as f64).collect()
}

#[test]
fn peak_area_linear_in_occupation() {
    let mut p = reference();
    p.noise.floor = 0.0;
    let net = LinearModeNetwork::at_operating_point(&p).unwrap();
    let x = grid(p.saw.linewidth_total, 200.0, 4000);
    let occupations: Vec<f64> = (0..12).map(|k| 0.01 * 10f64.powf(k as f64 * 3.0 / 11.0)).collect();
    let areas: Vec<f64> = occupations
        .iter()
        .map(|&n| {
            let bath = ThermalBath::with_occupation(n, p.saw.omega).unwrap();
            upconverted_psd(&p, &net, &bath, &x).unwrap().excess_area()
        })
        .collect();
    let sxy: f64 = occupations.iter().zip(&areas).map(|(n, a)| n * a).sum();
    let sxx: f64 = occupations.iter().map(|n| n * n).sum();
    let slope = sxy / sxx;
    let ssr: f64 = occupations.iter().zip(&areas).map(|(n, a)| (a - slope * n).powi(2)).sum();
    let sst: f64 = areas.iter().map(|a| a * a).sum();
    assert!(1.0 - ssr / sst > 0.9999);
    let factor = conversion_bandwidth_factor(&p, &net).unwrap();
    assert!((slope / factor - 1.0).abs() < 0.01);
}

#[test]
fn peak_width_and_occupation_from_fit() {
    let p = reference();
    let net = LinearModeNetwork::at_operating_point(&p).unwrap();
    let width = p.saw.linewidth_total;
    let x = grid(width, 20.0, 400);
    let bath = ThermalBath::with_occupation(0.57, p.saw.omega).unwrap();
    let psd = upconverted_psd(&p, &net, &bath, &x).unwrap();
    let fit = fit_lorentzian(&psd.offsets_hz, &psd.values, None).unwrap();
    assert!(fit.fwhm >= width && fit.fwhm <= 1.5 * width, "{}", fit.fwhm);
    assert!((fit.offset / p.noise.floor - 1.0).abs() < 0.01);
    let (_, model_fwhm) = peak_shape(&net).unwrap();
    assert!((fit.fwhm / model_fwhm - 1.0).abs() < 0.01, "{} vs {model_fwhm}", fit.fwhm);
    let n = fit.area / psd.metadata.lorentzian_factor.unwrap();
    assert!((n - 0.57).abs() < 0.01 * 0.57, "{n}");
    // the exact integral sits a few percent below the Lorentzian's
    let exact = psd.metadata.conversion_factor.unwrap() / psd.metadata.lorentzian_factor.unwrap();
    assert!(exact < 1.0 && exact > 0.9, "{exact}");
}

#[test]
fn displacement_sensitivity_scaling() {
    let p = reference();
    let net = LinearModeNetwork::at_operating_point(&p).unwrap();
    let conv = sensitivity_conversion(&net).unwrap();
    let x = coupling_from_geometry(&p.geometry).unwrap().x_zpf;
    let s = displacement_sensitivity(x, p.noise.floor, conv).unwrap();
    assert!((s / 0.2e-18 - 1.0).abs() < 0.01, "{s}");
    let s4 = displacement_sensitivity(x, 4.0 * p.noise.floor, conv).unwrap();
    assert!((s4 / s - 2.0).abs() < 1e-12);
    assert_eq!(displacement_sensitivity(x, 0.0, conv).unwrap(), 0.0);
    assert!(displacement_sensitivity(x, 1.0, 0.0).is_err());
}
