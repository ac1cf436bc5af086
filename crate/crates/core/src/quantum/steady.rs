//! Steady states by direct linear solve with one equation replaced by the
//! trace condition.
//!
//! Two routes share that formulation. The dense route factors the full
//! `dim² × dim²` superoperator. The graded route uses the block-tridiagonal
//! structure that a [`Grading`](super::Grading) guarantees: coherence sectors
//! `k < 0` and `k > 0` are eliminated toward `k = 0` (a Schur complement),
//! the reduced `k = 0` system is solved with the trace row, and the outer
//! sectors are recovered by back-substitution. Both are exact direct solves;
//! the graded one just never forms the zero blocks.

use std::collections::BTreeMap;

use nalgebra::{DVector, LU};

use super::{CMatrix, DensityState, Liouvillian, QuantumError, Result, C64};

type Pair = (usize, usize);

/// Condition estimate above which the null space is considered degenerate.
const MAX_CONDITION: f64 = 1e13;

fn pivot_condition(lu: &LU<C64, nalgebra::Dyn, nalgebra::Dyn>) -> f64 {
    let u = lu.u();
    let diag: Vec<f64> = (0..u.nrows().min(u.ncols())).map(|i| u[(i, i)].norm()).collect();
    let max = diag.iter().cloned().fold(0.0, f64::max);
    let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

fn factor(m: CMatrix) -> Result<LU<C64, nalgebra::Dyn, nalgebra::Dyn>> {
    let lu = m.lu();
    let condition = pivot_condition(&lu);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(QuantumError::IllConditioned { condition });
    }
    Ok(lu)
}

fn solve_matrix(lu: &LU<C64, nalgebra::Dyn, nalgebra::Dyn>, rhs: &CMatrix) -> Result<CMatrix> {
    lu.solve(rhs).ok_or(QuantumError::IllConditioned { condition: f64::INFINITY })
}

/// Steady state of `L`, using the graded solver when a grading is attached.
pub fn steady_state(l: &Liouvillian) -> Result<DensityState> {
    match l.grading() {
        Some(_) => steady_state_graded(l),
        None => steady_state_dense(l),
    }
}

/// Dense solve on the full superoperator.
pub fn steady_state_dense(l: &Liouvillian) -> Result<DensityState> {
    let d = l.dim();
    let mut s = l.superoperator();
    // row 0 is the equation for ρ₀₀; replace it with Tr ρ = 1
    for col in 0..d * d {
        s[(0, col)] = C64::new(0.0, 0.0);
    }
    for i in 0..d {
        s[(0, i + i * d)] = C64::new(1.0, 0.0);
    }
    let mut rhs = DVector::zeros(d * d);
    rhs[0] = C64::new(1.0, 0.0);
    let lu = factor(s)?;
    let x = lu.solve(&rhs).ok_or(QuantumError::IllConditioned { condition: f64::INFINITY })?;
    let rho = CMatrix::from_column_slice(d, d, x.as_slice());
    finish(l, rho)
}

fn steady_state_graded(l: &Liouvillian) -> Result<DensityState> {
    let grading = l.grading().expect("graded solve needs a grading");
    let sectors = grading.sectors();
    let zero = sectors.get(&0).expect("diagonal pairs always populate sector 0");
    let conserving = l.is_charge_conserving();

    // W_k maps x_{k±1} (toward zero) to −x_k
    let mut transfer: BTreeMap<i32, CMatrix> = BTreeMap::new();
    let mut reduced = l.block(zero, zero);

    if !conserving {
        for side in [-1i32, 1] {
            let keys: Vec<i32> = if side < 0 {
                sectors.keys().cloned().filter(|&k| k < 0).collect()
            } else {
                sectors.keys().rev().cloned().filter(|&k| k > 0).collect()
            };
            // walk from the outermost sector toward zero
            let mut schur: Option<(i32, CMatrix)> = None;
            for &k in &keys {
                let pairs = &sectors[&k];
                let mut d = l.block(pairs, pairs);
                if let Some((outer, s_outer)) = schur.take() {
                    if outer == k + side {
                        let outer_pairs = &sectors[&outer];
                        let lu = factor(s_outer)?;
                        let w = solve_matrix(&lu, &l.block(outer_pairs, pairs))?;
                        d -= l.block(pairs, outer_pairs) * &w;
                        transfer.insert(outer, w);
                    }
                }
                schur = Some((k, d));
            }
            if let Some((inner, s_inner)) = schur {
                if inner == side {
                    let inner_pairs = &sectors[&inner];
                    let lu = factor(s_inner)?;
                    let w = solve_matrix(&lu, &l.block(inner_pairs, zero))?;
                    reduced -= l.block(zero, inner_pairs) * &w;
                    transfer.insert(inner, w);
                }
            }
        }
    }

    let trace_row = zero.iter().position(|&p| p == (0, 0)).expect("(0,0) lies in sector 0");
    for col in 0..zero.len() {
        reduced[(trace_row, col)] = match zero[col] {
            (i, j) if i == j => C64::new(1.0, 0.0),
            _ => C64::new(0.0, 0.0),
        };
    }
    let mut rhs = DVector::zeros(zero.len());
    rhs[trace_row] = C64::new(1.0, 0.0);
    let lu = factor(reduced)?;
    let x0 = lu.solve(&rhs).ok_or(QuantumError::IllConditioned { condition: f64::INFINITY })?;

    let d = l.dim();
    let mut rho = CMatrix::zeros(d, d);
    scatter(&mut rho, zero, &x0);
    for side in [-1i32, 1] {
        let mut inner = x0.clone();
        let mut k = side;
        while let Some(w) = transfer.get(&k) {
            let xk = -(w * &inner);
            scatter(&mut rho, &sectors[&k], &xk);
            inner = xk;
            k += side;
        }
    }
    finish(l, rho)
}

fn scatter(rho: &mut CMatrix, pairs: &[Pair], x: &DVector<C64>) {
    for (&(i, j), v) in pairs.iter().zip(x.iter()) {
        rho[(i, j)] = *v;
    }
}

fn finish(l: &Liouvillian, rho: CMatrix) -> Result<DensityState> {
    let residual = l.apply(&rho).norm();
    let scale = l.norm_bound() * rho.norm();
    if scale > 0.0 && residual > 1e-8 * scale {
        return Err(QuantumError::IllConditioned { condition: residual / scale });
    }
    DensityState::from_numerical(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{annihilator, lindblad, Grading, OperatorMatrix};

    fn thermal_mode(n: usize, nbar: f64, rate: f64) -> Liouvillian {
        let a = annihilator(n).unwrap();
        lindblad(&OperatorMatrix::zeros(n), &[(a.clone(), rate * (nbar + 1.0)), (a.adjoint(), rate * nbar)])
            .unwrap()
    }

    #[test]
    fn zero_temperature_decay_gives_vacuum() {
        let l = thermal_mode(5, 0.0, 2.0);
        let rho = steady_state(&l).unwrap();
        assert!((rho.population(0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn thermal_mode_is_gibbs_weighted() {
        // oracle: truncated geometric distribution p_n ∝ (n̄/(n̄+1))^n
        let nbar = 0.57;
        let n = 12;
        let l = thermal_mode(n, nbar, 1.0);
        let dense = steady_state_dense(&l).unwrap();
        let graded = steady_state(&l.clone().with_grading(Grading::new((0..n as i32).collect())).unwrap())
            .unwrap();
        let x = nbar / (nbar + 1.0);
        let z: f64 = (0..n).map(|k| x.powi(k as i32)).sum();
        for k in 0..n {
            let p = x.powi(k as i32) / z;
            assert!((dense.population(k) - p).abs() < 1e-12);
            assert!((graded.population(k) - p).abs() < 1e-12);
        }
    }

    #[test]
    fn graded_matches_dense_for_driven_mode() {
        let n = 6;
        let a = annihilator(n).unwrap();
        let h = &(&a.adjoint() * &a).scale(0.4) + &a.plus_adjoint().scale(0.3);
        let h = OperatorMatrix::hermitian(h.matrix().clone()).unwrap();
        let l = lindblad(&h, &[(a.clone(), 1.0), (a.adjoint(), 0.1)]).unwrap();
        let dense = steady_state_dense(&l).unwrap();
        let graded =
            steady_state(&l.with_grading(Grading::new((0..n as i32).collect())).unwrap()).unwrap();
        assert!(dense.trace_distance(&graded) < 1e-10);
    }

    #[test]
    fn degenerate_null_space_is_reported() {
        // no dissipation: every diagonal state is stationary
        let a = annihilator(3).unwrap();
        let h = OperatorMatrix::hermitian((&a.adjoint() * &a).matrix().clone()).unwrap();
        let l = lindblad(&h, &[]).unwrap();
        assert!(matches!(steady_state_dense(&l), Err(QuantumError::IllConditioned { .. })));
    }
}
