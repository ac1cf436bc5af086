use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use saw_transducer::fitting::{
    fano, fit_fano, fit_linear, fit_lorentzian, lorentzian, reflection_linewidths, reflection_model,
    ReflectionTrace,
};

fn axis(center: f64, width: f64, span: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| center - span * width + 2.0 * span * width * k as f64 / (n - 1) as f64).collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn lorentzian_recovery_over_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let fwhm = 10f64.powf(rng.gen_range(3.0..6.0));
        let center = rng.gen_range(-1.0..1.0) * fwhm;
        let area = 10f64.powf(rng.gen_range(-2.0..3.0)) * fwhm;
        let offset = rng.gen_range(0.0..1.0) * area / fwhm;
        let x = axis(0.0, fwhm, 10.0, 201);
        let y: Vec<f64> = x.iter().map(|&v| lorentzian(v, center, fwhm, area, offset)).collect();
        let fit = fit_lorentzian(&x, &y, None).unwrap();
        assert!(rel(fit.fwhm, fwhm) < 1e-6 && rel(fit.area, area) < 1e-6);
        assert!((fit.center - center).abs() < 1e-6 * fwhm);
        assert!((fit.offset - offset).abs() < 1e-6 * area / fwhm);
    }
}

#[test]
fn fano_recovery_over_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let fwhm = 10f64.powf(rng.gen_range(3.0..6.0));
        let center = rng.gen_range(-1.0..1.0) * fwhm;
        let q = rng.gen_range(0.5..5.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let height = rng.gen_range(0.1..10.0);
        let offset = rng.gen_range(0.0..1.0);
        let x = axis(0.0, fwhm, 10.0, 201);
        let y: Vec<f64> = x.iter().map(|&v| fano(v, center, fwhm, height, 1.0 / q, offset)).collect();
        let fit = fit_fano(&x, &y, None).unwrap();
        assert!(rel(fit.fwhm, fwhm) < 1e-6, "fwhm {} vs {fwhm}", fit.fwhm);
        assert!(rel(fit.q, q) < 1e-6, "q {} vs {q}", fit.q);
        assert!((fit.center - center).abs() < 1e-6 * fwhm);
    }
}

#[test]
fn linear_recovery_over_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let (slope, intercept) = (rng.gen_range(-1e3..1e3), rng.gen_range(-1e3..1e3));
        let x: Vec<f64> = (0..20).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let y: Vec<f64> = x.iter().map(|v| slope * v + intercept).collect();
        let fit = fit_linear(&x, &y).unwrap();
        assert!(rel(fit.slope, slope) < 1e-9 && (fit.intercept - intercept).abs() < 1e-9 * intercept.abs().max(1.0));
    }
    let fit = fit_linear(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
    assert_eq!((fit.slope, fit.intercept, fit.r_squared), (2.0, 1.0, 1.0));
    assert!(fit_linear(&[1.0, 1.0], &[0.0, 1.0]).is_err());
}

/// Relative width error of a fit to a Lorentzian with Gaussian noise of
/// `noise` times the peak height, sampled at `n` points over ±`span` widths.
fn noisy_lorentzian_fwhm(rng: &mut ChaCha8Rng, n: usize, span: f64, noise: f64) -> f64 {
    let fwhm = 36.6e3;
    let area = 0.57 * std::f64::consts::PI * fwhm / 2.0;
    let peak = 0.57;
    let normal = Normal::new(0.0, noise * peak).unwrap();
    let x = axis(0.0, fwhm, span, n);
    let y: Vec<f64> = x.iter().map(|&v| lorentzian(v, 0.0, fwhm, area, 1.0) + normal.sample(rng)).collect();
    fit_lorentzian(&x, &y, None).unwrap().fwhm / fwhm - 1.0
}

#[test]
fn error_scales_as_inverse_root_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let rms: Vec<f64> = [50, 200, 800]
        .iter()
        .map(|&n| {
            let errs: Vec<f64> = (0..200).map(|_| noisy_lorentzian_fwhm(&mut rng, n, 5.0, 0.01)).collect();
            (errs.iter().map(|e| e * e).sum::<f64>() / errs.len() as f64).sqrt()
        })
        .collect();
    for w in rms.windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio - 2.0).abs() < 0.3, "{rms:?}");
    }
}

#[test]
fn five_percent_noise_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let worst = (0..100).map(|_| noisy_lorentzian_fwhm(&mut rng, 8001, 5.0, 0.05).abs()).fold(0.0, f64::max);
    assert!(worst < 0.02, "{worst}");

    let normal = Normal::new(0.0, 1.0).unwrap();
    let (fwhm, q) = (1e5, 1.5);
    let x = axis(0.0, fwhm, 10.0, 401);
    let clean: Vec<f64> = x.iter().map(|&v| fano(v, 0.0, fwhm, 1.0, 1.0 / q, 0.2)).collect();
    let peak = clean.iter().cloned().fold(0.0, f64::max);
    for _ in 0..100 {
        let y: Vec<f64> = clean.iter().map(|v| v + 0.05 * peak * normal.sample(&mut rng)).collect();
        let fit = fit_fano(&x, &y, None).unwrap();
        assert!(rel(fit.q, q) < 0.1, "q {}", fit.q);
    }
}

#[test]
fn fano_on_symmetric_data() {
    let fwhm = 36.6e3;
    let x = axis(0.0, fwhm, 10.0, 301);
    let y: Vec<f64> = x.iter().map(|&v| lorentzian(v, 0.0, fwhm, 1e4, 0.1)).collect();
    let fano_fit = fit_fano(&x, &y, None).unwrap();
    assert!(fano_fit.inverse_q.abs() < 0.05);

    // one extra parameter may not buy more than the F-test threshold
    let f_crit = 3.87; // F(1, ~300) at 95%
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let normal = Normal::new(0.0, 0.05 * y.iter().cloned().fold(0.0, f64::max)).unwrap();
    let mut rejections = 0;
    for _ in 0..40 {
        let noisy: Vec<f64> = y.iter().map(|v| v + normal.sample(&mut rng)).collect();
        let ssr = |rms: f64| rms * rms * x.len() as f64;
        let l = ssr(fit_lorentzian(&x, &noisy, None).unwrap().residual_rms);
        let f = ssr(fit_fano(&x, &noisy, None).unwrap().residual_rms);
        let stat = (l - f) / (f / (x.len() - 5) as f64);
        if stat > f_crit {
            rejections += 1;
        }
    }
    assert!(rejections <= 6, "{rejections}");
    let l = fit_lorentzian(&x, &y, None).unwrap().residual_rms;
    assert!(fano_fit.residual_rms >= 0.0 && l < 1e-9);
}

#[test]
fn fits_are_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let x = axis(0.0, 1.0, 10.0, 101);
    let y: Vec<f64> = x.iter().map(|&v| lorentzian(v, 0.1, 1.0, 2.0, 0.3) + rng.gen_range(-0.05..0.05)).collect();
    assert_eq!(fit_lorentzian(&x, &y, None).unwrap(), fit_lorentzian(&x, &y, None).unwrap());
    assert_eq!(fit_fano(&x, &y, None).unwrap(), fit_fano(&x, &y, None).unwrap());
}

#[test]
fn gain_and_stark_calibrations() {
    // PSD-vs-phonon-number lines with and without a 22 dB stage
    let n: Vec<f64> = (0..10).map(|k| 0.1 * k as f64).collect();
    let low: Vec<f64> = n.iter().map(|v| 3.0 * v + 7.9).collect();
    let high: Vec<f64> = low.iter().map(|v| v * 10f64.powf(2.2)).collect();
    let ratio = fit_linear(&n, &high).unwrap().slope / fit_linear(&n, &low).unwrap().slope;
    assert!(rel(ratio, 10f64.powf(2.2)) < 1e-12);

    // Stark shift vs drive power, χ_q per quantum and k quanta per mW
    let (chi_q, k) = (231e3, 4.2e5);
    let power: Vec<f64> = (0..12).map(|i| 1e-6 * i as f64).collect();
    let shift: Vec<f64> = power.iter().map(|p| chi_q * k * p).collect();
    let slope = fit_linear(&power, &shift).unwrap().slope;
    assert!(rel(slope / chi_q, k) < 1e-12);
}

#[test]
fn reflection_recovery() {
    let (center, total, external) = (5.05e9, 716e3, 152e3);
    let f = axis(center, total, 8.0, 401);
    let trace: Vec<_> = f.iter().map(|&v| reflection_model(v, center, total, external)).collect();
    let fit = reflection_linewidths(&f, &ReflectionTrace::Complex(trace.clone())).unwrap();
    assert!(rel(fit.total, total) < 1e-6 && rel(fit.external, external) < 1e-6);
    assert!(!fit.ambiguous);
    assert!((fit.coupling_factor() - 0.212).abs() < 1e-3);

    let mag: Vec<f64> = trace.iter().map(|s| s.norm_sqr()).collect();
    let fit = reflection_linewidths(&f, &ReflectionTrace::Magnitude(mag)).unwrap();
    assert!(fit.ambiguous);
    assert!(rel(fit.total, total) < 1e-6 && rel(fit.external, external) < 1e-6);
    assert!(rel(fit.alternative_external(), total - external) < 1e-6);

    let critical = reflection_model(center, center, total, total / 2.0);
    assert!(critical.norm() < 1e-15);
}
