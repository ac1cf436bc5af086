use serde::{Deserialize, Serialize};

use super::{check_xy, FitError, FitReport, ParamEstimate, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// 1-σ of (slope, intercept).
    pub uncertainties: [f64; 2],
    pub r_squared: f64,
}

impl LinearFit {
    pub fn evaluate(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }

    pub fn report(&self) -> FitReport {
        FitReport {
            model: "linear".into(),
            parameters: vec![
                ParamEstimate { name: "slope".into(), value: self.slope, sigma: self.uncertainties[0] },
                ParamEstimate { name: "intercept".into(), value: self.intercept, sigma: self.uncertainties[1] },
            ],
            residual_rms: f64::NAN,
            iterations: 0,
            converged: true,
        }
    }
}

/// Ordinary least squares `y = slope·x + intercept` with standard errors.
pub fn fit_linear(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    check_xy(x, y, 2)?;
    let n = x.len() as f64;
    let xm = x.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - xm).powi(2)).sum();
    if sxx == 0.0 {
        return Err(FitError::Degenerate("all x values are identical".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - xm) * (b - ym)).sum();
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let ssr: f64 = x.iter().zip(y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum();
    let sst: f64 = y.iter().map(|b| (b - ym).powi(2)).sum();
    let s2 = if x.len() > 2 { ssr / (n - 2.0) } else { 0.0 };
    let r_squared = if sst > 0.0 { (1.0 - ssr / sst).clamp(0.0, 1.0) } else { 1.0 };
    Ok(LinearFit {
        slope,
        intercept,
        uncertainties: [(s2 / sxx).sqrt(), (s2 * (1.0 / n + xm * xm / sxx)).sqrt()],
        r_squared,
    })
}
