//! One-port resonator reflection `S(f) = 1 − γ_ex / (i(f − f₀) + γ/2)`
//! (`e^{−iωt}` phasors, rates in Hz as FWHM).
//!
//! A magnitude trace `|S|²` is symmetric under `γ_ex ↔ γ − γ_ex`, so it
//! cannot tell under- from over-coupling. Such fits are flagged ambiguous
//! and return the under-coupled branch `γ_ex ≤ γ/2`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::lm::{sigma, solve, LmOptions, Problem};
use super::{half_max_width, FitError, FitReport, ParamEstimate, Result, Scaling};
use crate::quantum::C64;

pub fn reflection_model(f: f64, center: f64, total: f64, external: f64) -> C64 {
    C64::new(1.0, 0.0) - external / C64::new(0.5 * total, f - center)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReflectionTrace {
    Complex(Vec<C64>),
    /// `|S|²`.
    Magnitude(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReflectionFit {
    pub center: f64,
    pub total: f64,
    pub external: f64,
    /// 1-σ of (center, total, external).
    pub uncertainties: [f64; 3],
    /// Set for magnitude-only data; `γ − γ_ex` fits equally well.
    pub ambiguous: bool,
    pub residual_rms: f64,
    pub iterations: usize,
}

impl ReflectionFit {
    pub fn coupling_factor(&self) -> f64 {
        self.external / self.total
    }

    /// External rate of the other coupling branch.
    pub fn alternative_external(&self) -> f64 {
        self.total - self.external
    }

    pub fn report(&self) -> FitReport {
        let names = ["center", "total", "external"];
        let values = [self.center, self.total, self.external];
        FitReport {
            model: "reflection".into(),
            parameters: names
                .iter()
                .zip(values.iter().zip(&self.uncertainties))
                .map(|(n, (&value, &sigma))| ParamEstimate { name: n.to_string(), value, sigma })
                .collect(),
            residual_rms: self.residual_rms,
            iterations: self.iterations,
            converged: true,
        }
    }
}

struct ComplexProblem<'a> {
    x: &'a [f64],
    s: &'a [C64],
}

/// `∂S/∂(f₀, γ, γ_ex)` at offset `f`.
fn gradient(f: f64, p: &[f64]) -> (C64, [C64; 3]) {
    let z = C64::new(0.5 * p[1], f - p[0]);
    let s = C64::new(1.0, 0.0) - p[2] / z;
    let dz = p[2] / (z * z);
    (s, [dz * C64::new(0.0, -1.0), dz * 0.5, -1.0 / z])
}

impl Problem for ComplexProblem<'_> {
    fn residual_count(&self) -> usize {
        2 * self.x.len()
    }
    fn param_count(&self) -> usize {
        3
    }
    fn eval(&self, p: &[f64], r: &mut DVector<f64>, mut jac: Option<&mut DMatrix<f64>>) {
        for (i, &f) in self.x.iter().enumerate() {
            let (s, d) = gradient(f, p);
            let res = s - self.s[i];
            r[2 * i] = res.re;
            r[2 * i + 1] = res.im;
            if let Some(j) = jac.as_deref_mut() {
                for k in 0..3 {
                    j[(2 * i, k)] = d[k].re;
                    j[(2 * i + 1, k)] = d[k].im;
                }
            }
        }
    }
}

struct MagnitudeProblem<'a> {
    x: &'a [f64],
    r2: &'a [f64],
}

impl Problem for MagnitudeProblem<'_> {
    fn residual_count(&self) -> usize {
        self.x.len()
    }
    fn param_count(&self) -> usize {
        3
    }
    fn eval(&self, p: &[f64], r: &mut DVector<f64>, mut jac: Option<&mut DMatrix<f64>>) {
        for (i, &f) in self.x.iter().enumerate() {
            let (s, d) = gradient(f, p);
            r[i] = s.norm_sqr() - self.r2[i];
            if let Some(j) = jac.as_deref_mut() {
                for k in 0..3 {
                    j[(i, k)] = 2.0 * (s.conj() * d[k]).re;
                }
            }
        }
    }
}

/// Fits `γ` and `γ_ex` to a reflection trace sampled at frequencies `f`.
pub fn reflection_linewidths(f: &[f64], trace: &ReflectionTrace) -> Result<ReflectionFit> {
    let r2: Vec<f64> = match trace {
        ReflectionTrace::Complex(s) => s.iter().map(|v| v.norm_sqr()).collect(),
        ReflectionTrace::Magnitude(m) => m.clone(),
    };
    super::check_xy(f, &r2, 4)?;
    let scaling = Scaling::new(f, &r2)?;
    let xs = scaling.x(f);
    let span = scaling.x_span;
    // dip of depth 1 − R_min and FWHM γ; √R_min = 1 − 2γ_ex/γ when under-coupled
    let min = (0..r2.len()).min_by(|&i, &j| r2[i].total_cmp(&r2[j])).unwrap_or(0);
    let base = r2.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let width = half_max_width(&xs, &r2, base, min).filter(|w| *w > 0.0).unwrap_or(0.1);
    let ext = 0.5 * width * (1.0 - r2[min].max(0.0).sqrt());
    let p0 = [xs[min], width, ext.max(1e-3 * width)];
    let (out, ambiguous, n_res) = match trace {
        ReflectionTrace::Complex(s) => {
            let problem = ComplexProblem { x: &xs, s };
            let mut best = solve(&problem, &p0, LmOptions::default())?;
            // also try the over-coupled start and keep the better one
            let alt = [p0[0], p0[1], p0[1] - p0[2]];
            if let Ok(o) = solve(&problem, &alt, LmOptions::default()) {
                if o.ssr < best.ssr {
                    best = o;
                }
            }
            (best, false, 2 * f.len())
        }
        ReflectionTrace::Magnitude(m) => {
            (solve(&MagnitudeProblem { x: &xs, r2: m }, &p0, LmOptions::default())?, true, f.len())
        }
    };
    let p = &out.params;
    let total = p[1].abs() * span;
    let mut external = p[2] * span;
    if total == 0.0 || !total.is_finite() {
        return Err(FitError::NonConvergence { iterations: out.iterations });
    }
    if ambiguous && external > 0.5 * total {
        external = total - external;
    }
    Ok(ReflectionFit {
        center: scaling.x_mid + span * p[0],
        total,
        external,
        uncertainties: [span * sigma(&out.covariance, 0), span * sigma(&out.covariance, 1), span * sigma(&out.covariance, 2)],
        ambiguous,
        residual_rms: (out.ssr / n_res as f64).sqrt(),
        iterations: out.iterations,
    })
}
