//! Least-squares line-shape fits: Lorentzian, Fano, linear and resonator
//! reflection.
//!
//! Nonlinear fits use Levenberg–Marquardt with Marquardt diagonal scaling,
//! damping ×10 on rejected and ÷10 on accepted steps, and stop when the
//! relative parameter step drops below 1e-10 or after 200 iterations. Data
//! are internally shifted and scaled to unit range. Uncertainties are
//! `√diag((JᵀJ)⁻¹ · SSR/(N − p))` and only approximate.

mod lm;
mod lorentzian;
mod linear;
mod reflection;

pub use linear::{fit_linear, LinearFit};
pub use lm::{LmOptions, LmOutcome};
pub use lorentzian::{fano, fit_fano, fit_lorentzian, lorentzian, FanoFit, FanoGuess, LorentzianFit, LorentzianGuess};
pub use reflection::{reflection_linewidths, reflection_model, ReflectionFit, ReflectionTrace};

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FitError {
    #[error("fit did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("degenerate data: {0}")]
    Degenerate(String),
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("x and y lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

pub type Result<T> = std::result::Result<T, FitError>;

/// One fitted parameter with its 1-σ uncertainty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamEstimate {
    pub name: String,
    pub value: f64,
    pub sigma: f64,
}

/// Serializable summary of any fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub model: String,
    pub parameters: Vec<ParamEstimate>,
    pub residual_rms: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn check_xy(x: &[f64], y: &[f64], needed: usize) -> Result<()> {
    if x.len() != y.len() {
        return Err(FitError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < needed {
        return Err(FitError::TooFewPoints { needed, got: x.len() });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(FitError::Degenerate("non-finite input".into()));
    }
    Ok(())
}

/// Affine map of the abscissa to `[-1/2, 1/2]` and of the ordinate to unit
/// peak magnitude.
#[derive(Debug, Clone, Copy)]
struct Scaling {
    x_mid: f64,
    x_span: f64,
    y_scale: f64,
}

impl Scaling {
    fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        let (lo, hi) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        if !(hi > lo) {
            return Err(FitError::Degenerate("all x values are identical".into()));
        }
        let y_scale = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let y_first = y[0];
        if y.iter().all(|&v| v == y_first) {
            return Err(FitError::Degenerate("y has zero variance".into()));
        }
        Ok(Self { x_mid: 0.5 * (lo + hi), x_span: hi - lo, y_scale })
    }

    fn x(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|v| (v - self.x_mid) / self.x_span).collect()
    }

    fn y(&self, y: &[f64]) -> Vec<f64> {
        y.iter().map(|v| v / self.y_scale).collect()
    }
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Width between the half-height crossings around `peak` of `|y − base|`,
/// linearly interpolated; `None` when a side never drops below half.
fn half_max_width(x: &[f64], y: &[f64], base: f64, peak: usize) -> Option<f64> {
    let h = |i: usize| (y[i] - base).abs();
    let half = 0.5 * h(peak);
    let cross = |i: usize, j: usize| {
        let (hi, hj) = (h(i), h(j));
        x[i] + (x[j] - x[i]) * (hi - half) / (hi - hj)
    };
    let mut left = None;
    for i in (0..peak).rev() {
        if h(i) < half {
            left = Some(cross(i + 1, i));
            break;
        }
    }
    let mut right = None;
    for i in peak + 1..x.len() {
        if h(i) < half {
            right = Some(cross(i - 1, i));
            break;
        }
    }
    match (left, right) {
        (Some(l), Some(r)) => Some((r - l).abs()),
        (Some(l), None) => Some(2.0 * (x[peak] - l).abs()),
        (None, Some(r)) => Some(2.0 * (r - x[peak]).abs()),
        (None, None) => None,
    }
}
