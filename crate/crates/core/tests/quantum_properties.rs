use std::f64::consts::PI;

use nalgebra::DMatrix;
use proptest::prelude::*;
use saw_transducer::fitting::fit_lorentzian;
use saw_transducer::quantum::{
    annihilator, embed, evolve, lindblad, spectral_radius_bound, steady_state, transmon_projector,
    two_time_psd, two_time_psd_resolvent, CorrelatorOptions, DensityState, Grading, HilbertConfig,
    Liouvillian, OperatorMatrix, Subsystem, C64, EXCITED, GROUND, SECOND,
};
use saw_transducer::units::angular;

fn close(a: C64, b: f64) -> bool {
    (a - C64::new(b, 0.0)).norm() < 1e-12
}

#[test]
fn ladder_matrix_elements() {
    let a = annihilator(3).unwrap();
    assert!(close(a.get(0, 1), 1.0));
    assert!(close(a.get(1, 2), 2f64.sqrt()));
    assert!(close(a.get(0, 2), 0.0));
    assert!(annihilator(1).is_err());
}

proptest! {
    #[test]
    fn canonical_commutator_below_the_cutoff(n in 2usize..12) {
        let a = annihilator(n).unwrap();
        let comm = a.commutator(&a.adjoint());
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!(close(comm.get(i, j), expected));
            }
        }
    }
}

#[test]
fn projector_algebra() {
    let p = |k, l| transmon_projector(k, l, 3).unwrap();
    let sum = &(&p(GROUND, GROUND) + &p(EXCITED, EXCITED)) + &p(SECOND, SECOND);
    assert_eq!(sum.matrix(), OperatorMatrix::identity(3).matrix());
    assert_eq!((&p(GROUND, EXCITED) * &p(EXCITED, GROUND)).matrix(), p(GROUND, GROUND).matrix());
    assert_eq!(p(GROUND, SECOND).adjoint().matrix(), p(SECOND, GROUND).matrix());
    assert!(transmon_projector(3, 0, 3).is_err());
}

#[test]
fn embedding() {
    let cfg = HilbertConfig::new(3, 3, 4).unwrap();
    let id = embed(&OperatorMatrix::identity(3), Subsystem::Qubit, cfg).unwrap();
    assert_eq!(id.matrix(), &DMatrix::identity(cfg.dim(), cfg.dim()));
    let a = embed(&annihilator(3).unwrap(), Subsystem::Mw, cfg).unwrap();
    let c = embed(&annihilator(4).unwrap(), Subsystem::Saw, cfg).unwrap();
    assert_eq!(a.commutator(&c).matrix().norm(), 0.0);
    let see = embed(&transmon_projector(EXCITED, EXCITED, 3).unwrap(), Subsystem::Qubit, cfg).unwrap();
    assert!(close(see.trace(), 12.0));
    assert!(embed(&annihilator(3).unwrap(), Subsystem::Saw, cfg).is_err());
    assert!(HilbertConfig::new(1, 3, 2).is_err());
    assert!(HilbertConfig::new(2, 2, 2).is_err());
}

fn thermal(n: usize, nbar: f64, rate: f64) -> Liouvillian {
    let a = annihilator(n).unwrap();
    lindblad(&OperatorMatrix::zeros(n), &[(a.clone(), rate * (nbar + 1.0)), (a.adjoint(), rate * nbar)])
        .unwrap()
        .with_grading(Grading::new((0..n as i32).collect()))
        .unwrap()
}

#[test]
fn detailed_balance() {
    for &nbar in &[0.0, 0.57, 1.8, 5.0] {
        let n = 160;
        let l = thermal(n, nbar, 1.0);
        let rho = steady_state(&l).unwrap();
        let num = annihilator(n).unwrap();
        let mean = rho.expect(&(&num.adjoint() * &num)).re;
        assert!((mean - nbar).abs() < 1e-6, "n̄ = {nbar}: {mean}");
    }
}

#[test]
fn driven_damped_mode_linear_response() {
    // H = Δa†a + ε(a + a†), decay γ  ⇒  ⟨a⟩ = −ε/(Δ − iγ/2)
    let (delta, eps, gamma) = (0.7, 0.05, 1.3);
    let n = 8;
    let a = annihilator(n).unwrap();
    let h = &(&a.adjoint() * &a).scale(delta) + &a.plus_adjoint().scale(eps);
    let h = OperatorMatrix::hermitian(h.into_matrix()).unwrap();
    let l = lindblad(&h, &[(a.clone(), gamma)]).unwrap();
    let rho = steady_state(&l).unwrap();
    let expected = -eps / C64::new(delta, -gamma / 2.0);
    assert!((rho.expect(&a) - expected).norm() < 1e-8);
}

fn random_liouvillian(dim: usize, h: &[f64], ls: &[f64], rates: &[f64]) -> Liouvillian {
    let mut hm = DMatrix::<C64>::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            hm[(i, j)] = C64::new(h[i * dim + j], h[dim * dim + i * dim + j]);
        }
    }
    let hm = &hm + hm.adjoint();
    let collapses: Vec<(OperatorMatrix, f64)> = rates
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let off = k * 2 * dim * dim;
            let m = DMatrix::from_fn(dim, dim, |i, j| C64::new(ls[off + i * dim + j], ls[off + dim * dim + i * dim + j]));
            (OperatorMatrix::new(m), r)
        })
        .collect();
    lindblad(&OperatorMatrix::hermitian(hm).unwrap(), &collapses).unwrap()
}

fn random_state(dim: usize, v: &[f64]) -> DensityState {
    let m = DMatrix::from_fn(dim, dim, |i, j| C64::new(v[i * dim + j], v[dim * dim + i * dim + j]));
    let rho = &m * m.adjoint();
    let tr = rho.trace();
    DensityState::new(rho / tr).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn evolution_preserves_trace_and_hermiticity(
        h in prop::collection::vec(-1.0f64..1.0, 32),
        ls in prop::collection::vec(-1.0f64..1.0, 64),
        rates in prop::collection::vec(0.2f64..1.0, 2),
        s in prop::collection::vec(-1.0f64..1.0, 32),
    ) {
        let l = random_liouvillian(4, &h, &ls, &rates);
        let rho0 = random_state(4, &s);
        let dt = 0.05 / spectral_radius_bound(&l);
        let rho = evolve(&rho0, &l, 2.0, dt).unwrap();
        prop_assert!((rho.matrix().trace().re - 1.0).abs() < 1e-8);
        let m = rho.matrix();
        prop_assert!((m - m.adjoint()).norm() < 1e-9);
    }

    #[test]
    fn steady_state_is_the_long_time_limit(
        h in prop::collection::vec(-1.0f64..1.0, 18),
        ls in prop::collection::vec(-1.0f64..1.0, 36),
        rates in prop::collection::vec(0.5f64..1.5, 2),
    ) {
        let l = random_liouvillian(3, &h, &ls, &rates);
        let ss = steady_state(&l).unwrap();
        prop_assert!(l.apply(ss.matrix()).norm() < 1e-9 * l.norm_bound());
        let dt = 0.05 / spectral_radius_bound(&l);
        let long = evolve(&DensityState::basis(3, 0), &l, 200.0, dt).unwrap();
        prop_assert!(long.trace_distance(&ss) < 1e-6);
    }
}

fn number(n: usize) -> (OperatorMatrix, OperatorMatrix) {
    let a = annihilator(n).unwrap();
    (a.adjoint(), a)
}

#[test]
fn thermal_spectrum_area_and_window() {
    let n = 14;
    let nbar = 0.57;
    let width = 36.6e3;
    let l = thermal(n, nbar, angular(width));
    let rho = steady_state(&l).unwrap();
    let (ad, a) = number(n);
    let mean = rho.expect(&(&ad * &a)).re;
    for (span, fraction) in [(20.0, 2.0 / PI * 40f64.atan()), (200.0, 2.0 / PI * 400f64.atan())] {
        let grid: Vec<f64> = (-4000..=4000).map(|k| k as f64 * span * width / 4000.0).collect();
        let psd = two_time_psd_resolvent(&l, &ad, &a, &grid).unwrap();
        let area = psd.excess_area();
        assert!((area / (mean * fraction) - 1.0).abs() < 2e-3, "±{span}: {area}");
    }
    // a ±200-linewidth window recovers n̄ within 1%
    let grid: Vec<f64> = (-4000..=4000).map(|k| k as f64 * 200.0 * width / 4000.0).collect();
    let psd = two_time_psd_resolvent(&l, &ad, &a, &grid).unwrap();
    assert!((psd.excess_area() / nbar - 1.0).abs() < 0.01);
}

#[test]
fn thermal_spectrum_width_from_quadrature() {
    let n = 10;
    let width = 36.6e3;
    let l = thermal(n, 0.57, angular(width));
    let (ad, a) = number(n);
    let grid: Vec<f64> = (-100..=100).map(|k| k as f64 * width / 10.0).collect();
    let psd = two_time_psd(&l, &ad, &a, &grid, CorrelatorOptions::default()).unwrap();
    let fit = fit_lorentzian(&psd.offsets_hz, &psd.values, None).unwrap();
    assert!((fit.fwhm / width - 1.0).abs() < 0.02, "{}", fit.fwhm);
    assert!(fit.center.abs() < 1e-3 * width);
}

#[test]
fn vacuum_has_no_normal_ordered_noise() {
    let l = thermal(4, 0.0, 1.0);
    let (ad, a) = number(4);
    let psd = two_time_psd(&l, &ad, &a, &[-1.0, 0.0, 1.0], CorrelatorOptions::default()).unwrap();
    assert!(psd.values.iter().all(|&v| v == 0.0));
}
