//! Two-time correlation spectra via the quantum regression theorem.
//!
//! For a stationary state the correlator `⟨A(τ)B(0)⟩ = Tr[A e^{Lτ}(Bρ_ss)]`.
//! Spectra are returned per Hz and two-sided,
//! `S(f) = 2 Re ∫₀^∞ dτ e^{iωτ} Tr[A e^{Lτ}(Bρ_ss)]` with `ω = 2πf`, so that
//! `∫ S df = ⟨AB⟩` for a correlator that decays to zero. Note the kernel sign:
//! with `A = a†, B = a` a mode at frame detuning `Δ` appears at `f = −Δ/2π`.

use std::collections::BTreeMap;

use nalgebra::{DVector, Schur};

use super::evolve::rk4_step;
use super::{steady_state, CMatrix, Liouvillian, OperatorMatrix, QuantumError, Result, C64};
use crate::noise::NoisePsd;
use crate::units::angular;

/// Quadrature settings for [`two_time_psd`].
#[derive(Debug, Clone, Copy)]
pub struct CorrelatorOptions {
    /// Fixed quadrature step; defaults to `1/(50 · max rate)`.
    pub dt: Option<f64>,
    /// Integration cutoff; exceeding it without decay is an error.
    pub tau_max: Option<f64>,
    /// Relative decay threshold that ends the integration.
    pub threshold: f64,
}

impl Default for CorrelatorOptions {
    fn default() -> Self {
        Self { dt: None, tau_max: None, threshold: 1e-8 }
    }
}

const MAX_STEPS: usize = 20_000_000;
const FULL_SUPEROPERATOR_MAX_DIM: usize = 16;

/// Coherence sectors in which `x` has support, keyed by charge.
fn support(l: &Liouvillian, x: &CMatrix) -> BTreeMap<i32, Vec<(usize, usize)>> {
    let scale = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let sectors = l.grading().expect("graded").sectors();
    sectors
        .into_iter()
        .filter(|(_, pairs)| pairs.iter().any(|&(i, j)| x[(i, j)].norm() > 1e-15 * scale))
        .collect()
}

fn gather(x: &CMatrix, pairs: &[(usize, usize)]) -> DVector<C64> {
    DVector::from_iterator(pairs.len(), pairs.iter().map(|&(i, j)| x[(i, j)]))
}

fn inf_norm(m: &CMatrix) -> f64 {
    m.row_iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Linear propagation of `Bρ_ss` restricted to the sectors it touches.
enum Propagator {
    Sectors { blocks: Vec<(Vec<(usize, usize)>, CMatrix, DVector<C64>, DVector<C64>)> },
    Matrix { state: CMatrix },
}

fn spectrum_from(values: Vec<f64>, grid_hz: &[f64]) -> Result<NoisePsd> {
    let peak = values.iter().cloned().fold(0.0, f64::max);
    let min = values.iter().cloned().fold(0.0, f64::min);
    if min < -1e-9 * peak.max(f64::MIN_POSITIVE) && min < -1e-300 {
        return Err(QuantumError::NotAPowerSpectrum(min));
    }
    let values = values.into_iter().map(|v| v.max(0.0)).collect();
    NoisePsd::new(grid_hz.to_vec(), values, vec![0.0; grid_hz.len()])
        .map_err(|e| QuantumError::InvalidGrid(e.to_string()))
}

/// Emission spectrum by time-domain quadrature of the regression correlator.
///
/// Uses the trapezoidal rule with `dt = 1/(50 · max rate)`, where the max
/// rate is the larger of the propagated generator's norm bound and the
/// highest grid frequency. Integration stops once both the correlator and
/// the propagated operator fall below `threshold` of their initial size.
pub fn two_time_psd(
    l: &Liouvillian,
    a: &OperatorMatrix,
    b: &OperatorMatrix,
    grid_hz: &[f64],
    opts: CorrelatorOptions,
) -> Result<NoisePsd> {
    let rho = steady_state(l)?;
    let x0 = b.matrix() * rho.matrix();
    let a_m = a.matrix();
    let omegas: Vec<f64> = grid_hz.iter().map(|&f| angular(f)).collect();
    let max_omega = omegas.iter().map(|w| w.abs()).fold(0.0, f64::max);

    let x0_norm = x0.norm();
    if x0_norm == 0.0 {
        return spectrum_from(vec![0.0; grid_hz.len()], grid_hz);
    }

    let (mut prop, generator_rate) = if l.is_charge_conserving() {
        let mut blocks = Vec::new();
        let mut rate: f64 = 0.0;
        for (_, pairs) in support(l, &x0) {
            let gen = l.block(&pairs, &pairs);
            rate = rate.max(inf_norm(&gen));
            let x = gather(&x0, &pairs);
            let a_row = DVector::from_iterator(pairs.len(), pairs.iter().map(|&(i, j)| a_m[(j, i)]));
            blocks.push((pairs, gen, x, a_row));
        }
        (Propagator::Sectors { blocks }, rate)
    } else if l.dim() <= FULL_SUPEROPERATOR_MAX_DIM {
        let d = l.dim();
        let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (0..d).map(move |i| (i, j))).collect();
        let gen = l.block(&pairs, &pairs);
        let rate = inf_norm(&gen);
        let x = gather(&x0, &pairs);
        let a_row = DVector::from_iterator(pairs.len(), pairs.iter().map(|&(i, j)| a_m[(j, i)]));
        (Propagator::Sectors { blocks: vec![(pairs, gen, x, a_row)] }, rate)
    } else {
        (Propagator::Matrix { state: x0.clone() }, l.norm_bound())
    };

    let max_rate = generator_rate.max(max_omega);
    let dt = opts.dt.unwrap_or(1.0 / (50.0 * max_rate));
    let tau_max = opts.tau_max.unwrap_or(dt * MAX_STEPS as f64);
    let max_steps = ((tau_max / dt).ceil() as usize).min(MAX_STEPS);

    // exact one-step propagators for the sector route
    if let Propagator::Sectors { blocks } = &mut prop {
        for (_, gen, _, _) in blocks.iter_mut() {
            *gen = (&*gen * C64::new(dt, 0.0)).exp();
        }
    }

    let correlator = |prop: &Propagator| -> (C64, f64) {
        match prop {
            Propagator::Sectors { blocks } => blocks.iter().fold((C64::new(0.0, 0.0), 0.0), |acc, (_, _, x, a_row)| {
                (acc.0 + a_row.dot(x), acc.1 + x.norm_squared())
            }),
            Propagator::Matrix { state } => ((a_m * state).trace(), state.norm_squared()),
        }
    };

    let (c0, n0) = correlator(&prop);
    let n0 = n0.sqrt();
    let mut acc: Vec<C64> = vec![c0 * 0.5; omegas.len()];
    let mut phase: Vec<C64> = vec![C64::new(1.0, 0.0); omegas.len()];
    let rot: Vec<C64> = omegas.iter().map(|&w| C64::from_polar(1.0, w * dt)).collect();

    let mut decayed = false;
    for step in 1..=max_steps {
        match &mut prop {
            Propagator::Sectors { blocks } => {
                for (_, phi, x, _) in blocks.iter_mut() {
                    *x = &*phi * &*x;
                }
            }
            Propagator::Matrix { state } => *state = rk4_step(l, state, dt),
        }
        if step % 1024 == 0 {
            for (p, &w) in phase.iter_mut().zip(&omegas) {
                *p = C64::from_polar(1.0, w * dt * step as f64);
            }
        } else {
            for (p, r) in phase.iter_mut().zip(&rot) {
                *p *= r;
            }
        }
        let (c, n) = correlator(&prop);
        for (s, p) in acc.iter_mut().zip(&phase) {
            *s += c * p;
        }
        let small_c = c0.norm() == 0.0 || c.norm() < opts.threshold * c0.norm();
        if small_c && n.sqrt() < opts.threshold * n0 {
            // the last sample carries half weight in the trapezoid rule
            for (s, p) in acc.iter_mut().zip(&phase) {
                *s -= c * p * 0.5;
            }
            decayed = true;
            break;
        }
    }
    if !decayed {
        return Err(QuantumError::NonDecayingCorrelator { tau_max });
    }
    let values = acc.iter().map(|s| 2.0 * dt * s.re).collect();
    spectrum_from(values, grid_hz)
}

/// Same spectrum evaluated in the frequency domain,
/// `S(f) = 2 Re Tr[A (−(L + iω))⁻¹ (Bρ_ss)]`, via one complex Schur
/// factorization per coherence sector. Requires a charge-conserving grading
/// (or a small space) and a correlator with no stationary component.
pub fn two_time_psd_resolvent(
    l: &Liouvillian,
    a: &OperatorMatrix,
    b: &OperatorMatrix,
    grid_hz: &[f64],
) -> Result<NoisePsd> {
    let rho = steady_state(l)?;
    let x0 = b.matrix() * rho.matrix();
    let a_m = a.matrix();
    if x0.norm() == 0.0 {
        return spectrum_from(vec![0.0; grid_hz.len()], grid_hz);
    }
    let blocks: Vec<Vec<(usize, usize)>> = if l.is_charge_conserving() {
        support(l, &x0).into_values().collect()
    } else {
        let d = l.dim();
        vec![(0..d).flat_map(|j| (0..d).map(move |i| (i, j))).collect()]
    };

    let mut values = vec![0.0; grid_hz.len()];
    for pairs in blocks {
        let gen = l.block(&pairs, &pairs);
        let scale = inf_norm(&gen);
        let (q, t) = Schur::new(gen).unpack();
        let slowest = (0..t.nrows()).map(|i| t[(i, i)].re).fold(f64::NEG_INFINITY, f64::max);
        if slowest > -1e-10 * scale {
            return Err(QuantumError::NonDecayingCorrelator { tau_max: f64::INFINITY });
        }
        let x = q.adjoint() * gather(&x0, &pairs);
        let a_row = DVector::from_iterator(pairs.len(), pairs.iter().map(|&(i, j)| a_m[(j, i)]));
        let a_q = q.transpose() * a_row;
        for (v, &f) in values.iter_mut().zip(grid_hz) {
            let shift = C64::new(0.0, angular(f));
            let mut shifted = t.clone();
            for i in 0..shifted.nrows() {
                shifted[(i, i)] += shift;
            }
            let y = shifted.solve_upper_triangular(&x).expect("decaying spectrum keeps diagonal nonzero");
            *v += -2.0 * a_q.dot(&y).re;
        }
    }
    spectrum_from(values, grid_hz)
}
