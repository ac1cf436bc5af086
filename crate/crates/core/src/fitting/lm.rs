use nalgebra::{DMatrix, DVector};

use super::{FitError, Result};

/// A residual vector `r(p) = model(p) − data` with its Jacobian.
pub(crate) trait Problem {
    fn residual_count(&self) -> usize;
    fn param_count(&self) -> usize;
    fn eval(&self, p: &[f64], r: &mut DVector<f64>, jac: Option<&mut DMatrix<f64>>);
}

#[derive(Debug, Clone, Copy)]
pub struct LmOptions {
    pub max_iterations: usize,
    pub step_tolerance: f64,
    pub initial_damping: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self { max_iterations: 200, step_tolerance: 1e-10, initial_damping: 1e-3 }
    }
}

#[derive(Debug, Clone)]
pub struct LmOutcome {
    pub params: Vec<f64>,
    /// `(JᵀJ)⁻¹ · SSR/(N − p)`.
    pub covariance: DMatrix<f64>,
    pub ssr: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub(crate) fn solve(problem: &impl Problem, p0: &[f64], opts: LmOptions) -> Result<LmOutcome> {
    let m = problem.residual_count();
    let n = problem.param_count();
    let mut p = DVector::from_column_slice(p0);
    let mut r = DVector::zeros(m);
    let mut jac = DMatrix::zeros(m, n);
    problem.eval(p.as_slice(), &mut r, Some(&mut jac));
    let mut ssr = r.norm_squared();
    if !ssr.is_finite() {
        return Err(FitError::Degenerate("model is not finite at the initial guess".into()));
    }
    let mut lambda = opts.initial_damping;
    let mut trial_r = DVector::zeros(m);
    let mut iterations = 0;
    let mut converged = false;
    let mut last_step = f64::INFINITY;

    'outer: while iterations < opts.max_iterations {
        iterations += 1;
        let jtj = jac.transpose() * &jac;
        let grad = jac.transpose() * &r;
        loop {
            let mut a = jtj.clone();
            for k in 0..n {
                a[(k, k)] += lambda * jtj[(k, k)].max(1e-30);
            }
            let step = match a.clone().cholesky() {
                Some(ch) => ch.solve(&(-&grad)),
                None => match a.lu().solve(&(-&grad)) {
                    Some(s) => s,
                    None => {
                        lambda *= 10.0;
                        if lambda > 1e16 {
                            converged = true;
                            break 'outer;
                        }
                        continue;
                    }
                },
            };
            let trial = &p + &step;
            problem.eval(trial.as_slice(), &mut trial_r, None);
            let trial_ssr = trial_r.norm_squared();
            if trial_ssr.is_finite() && trial_ssr <= ssr {
                last_step = step.norm() / (p.norm() + opts.step_tolerance);
                p = trial;
                ssr = trial_ssr;
                problem.eval(p.as_slice(), &mut r, Some(&mut jac));
                lambda = (lambda / 10.0).max(1e-15);
                if last_step < opts.step_tolerance {
                    converged = true;
                    break 'outer;
                }
                break;
            }
            lambda *= 10.0;
            if lambda > 1e16 {
                // no descent direction left: at a minimum to working precision
                converged = true;
                break 'outer;
            }
        }
    }
    if !converged && last_step > 1e-6 {
        return Err(FitError::NonConvergence { iterations });
    }
    if p.iter().any(|v| !v.is_finite()) {
        return Err(FitError::NonConvergence { iterations });
    }
    let dof = (m.saturating_sub(n)).max(1) as f64;
    let jtj = jac.transpose() * &jac;
    let inv = jtj
        .clone()
        .try_inverse()
        .or_else(|| jtj.pseudo_inverse(1e-14).ok())
        .unwrap_or_else(|| DMatrix::zeros(n, n));
    Ok(LmOutcome { params: p.as_slice().to_vec(), covariance: inv * (ssr / dof), ssr, iterations, converged })
}

/// 1-σ of `gᵀ C g` for a derived quantity with gradient `g`.
pub(crate) fn propagate(cov: &DMatrix<f64>, grad: &[f64]) -> f64 {
    let g = DVector::from_column_slice(grad);
    (g.transpose() * cov * &g)[(0, 0)].max(0.0).sqrt()
}

pub(crate) fn sigma(cov: &DMatrix<f64>, k: usize) -> f64 {
    cov[(k, k)].max(0.0).sqrt()
}
