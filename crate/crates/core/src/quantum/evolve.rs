use super::{CMatrix, DensityState, Liouvillian, QuantumError, Result, C64};

/// Upper bound on the spectral radius of `L` used for step-size control.
pub fn spectral_radius_bound(l: &Liouvillian) -> f64 {
    l.norm_bound()
}

/// Integrate `dρ/dt = Lρ` from `ρ0` over `t` seconds with classical RK4.
///
/// The step is shortened so an integer number of steps lands on `t`.
/// Requires `dt · ‖L‖ < 0.1`.
pub fn evolve(rho0: &DensityState, l: &Liouvillian, t: f64, dt: f64) -> Result<DensityState> {
    if rho0.dim() != l.dim() {
        return Err(QuantumError::DimensionMismatch { expected: l.dim(), got: rho0.dim() });
    }
    let radius = spectral_radius_bound(l);
    let product = dt * radius;
    if !(dt > 0.0) || product >= 0.1 {
        return Err(QuantumError::StepTooLarge { dt, product });
    }
    if t <= 0.0 {
        return Ok(rho0.clone());
    }
    let steps = (t / dt).ceil() as usize;
    let h = t / steps as f64;
    let mut rho = rho0.matrix().clone();
    let mut max_drift: f64 = 0.0;
    for _ in 0..steps {
        rho = rk4_step(l, &rho, h);
        max_drift = max_drift.max((rho.trace() - C64::new(1.0, 0.0)).norm());
    }
    if max_drift > 1e-8 {
        return Err(QuantumError::TraceDrift(max_drift));
    }
    DensityState::from_numerical(rho)
}

pub(crate) fn rk4_step(l: &Liouvillian, x: &CMatrix, h: f64) -> CMatrix {
    let half = C64::new(0.5 * h, 0.0);
    let k1 = l.apply(x);
    let k2 = l.apply(&(x + &k1 * half));
    let k3 = l.apply(&(x + &k2 * half));
    let k4 = l.apply(&(x + &k3 * C64::new(h, 0.0)));
    x + (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * C64::new(h / 6.0, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{annihilator, lindblad, steady_state, OperatorMatrix};

    #[test]
    fn zero_generator_leaves_state_unchanged() {
        let l = lindblad(&OperatorMatrix::zeros(3), &[]).unwrap();
        let rho0 = DensityState::diagonal(&[0.2, 0.5, 0.3]).unwrap();
        let rho = evolve(&rho0, &l, 10.0, 0.01).unwrap();
        assert!(rho.trace_distance(&rho0) < 1e-15);
    }

    #[test]
    fn single_photon_decays_exponentially() {
        let gamma = 2.0e5;
        let a = annihilator(3).unwrap();
        let l = lindblad(&OperatorMatrix::zeros(3), &[(a, gamma)]).unwrap();
        let rho0 = DensityState::basis(3, 1);
        let dt = 0.05 / spectral_radius_bound(&l);
        let rho = evolve(&rho0, &l, 1.0 / gamma, dt).unwrap();
        assert!((rho.population(1) - (-1f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn rejects_oversized_step() {
        let a = annihilator(3).unwrap();
        let l = lindblad(&OperatorMatrix::zeros(3), &[(a, 1.0)]).unwrap();
        let rho0 = DensityState::basis(3, 1);
        assert!(matches!(evolve(&rho0, &l, 1.0, 1.0), Err(QuantumError::StepTooLarge { .. })));
    }

    #[test]
    fn long_time_evolution_reaches_steady_state() {
        let n = 6;
        let a = annihilator(n).unwrap();
        let h = &(&a.adjoint() * &a).scale(0.5) + &a.plus_adjoint().scale(0.4);
        let h = OperatorMatrix::hermitian(h.matrix().clone()).unwrap();
        let l = lindblad(&h, &[(a.clone(), 1.0), (a.adjoint(), 0.05)]).unwrap();
        let ss = steady_state(&l).unwrap();
        let dt = 0.05 / spectral_radius_bound(&l);
        let rho = evolve(&DensityState::basis(n, 0), &l, 40.0, dt).unwrap();
        assert!(rho.trace_distance(&ss) < 1e-6, "{}", rho.trace_distance(&ss));
    }
}
