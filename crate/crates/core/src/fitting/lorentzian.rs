//! Lorentzian `y = b + (A/π)(w/2)/((x − x₀)² + (w/2)²)`, where `A` is the
//! area above the offset and `w` the FWHM, and the Fano shape
//! `y = b + A(qw/2 + (x − x₀))²/((w/2)² + (x − x₀)²)`.
//!
//! The Fano fit works with `ε = 1/q` and `B = Aq²`,
//! `y = b + B(w/2 + ε(x − x₀))²/((w/2)² + (x − x₀)²)`, which stays regular
//! in the Lorentzian limit `q → ∞`. Its reported area is that of the resonant
//! part above the far-detuned level `b + Bε²`: `π B (w/2)(1 − ε²)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::lm::{propagate, sigma, solve, LmOptions, Problem};
use super::{check_xy, half_max_width, median, FitReport, ParamEstimate, Result, Scaling};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzianGuess {
    pub center: f64,
    pub fwhm: f64,
    pub area: f64,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LorentzianFit {
    pub center: f64,
    pub fwhm: f64,
    pub area: f64,
    pub offset: f64,
    /// 1-σ of (center, fwhm, area, offset).
    pub uncertainties: [f64; 4],
    pub residual_rms: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl LorentzianFit {
    pub fn evaluate(&self, x: f64) -> f64 {
        lorentzian(x, self.center, self.fwhm, self.area, self.offset)
    }

    pub fn report(&self) -> FitReport {
        let names = ["center", "fwhm", "area", "offset"];
        let values = [self.center, self.fwhm, self.area, self.offset];
        FitReport {
            model: "lorentzian".into(),
            parameters: estimates(&names, &values, &self.uncertainties),
            residual_rms: self.residual_rms,
            iterations: self.iterations,
            converged: self.converged,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FanoGuess {
    pub center: f64,
    pub fwhm: f64,
    /// `B = A q²`, the height scale of the resonant part.
    pub height: f64,
    /// `ε = 1/q`.
    pub inverse_q: f64,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FanoFit {
    pub center: f64,
    pub fwhm: f64,
    pub area: f64,
    pub offset: f64,
    /// Asymmetry `q`; infinite for a symmetric line.
    pub q: f64,
    pub inverse_q: f64,
    pub height: f64,
    /// 1-σ of (center, fwhm, area, offset, inverse_q).
    pub uncertainties: [f64; 5],
    pub residual_rms: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl FanoFit {
    pub fn evaluate(&self, x: f64) -> f64 {
        fano(x, self.center, self.fwhm, self.height, self.inverse_q, self.offset)
    }

    pub fn report(&self) -> FitReport {
        let names = ["center", "fwhm", "area", "offset", "inverse_q"];
        let values = [self.center, self.fwhm, self.area, self.offset, self.inverse_q];
        FitReport {
            model: "fano".into(),
            parameters: estimates(&names, &values, &self.uncertainties),
            residual_rms: self.residual_rms,
            iterations: self.iterations,
            converged: self.converged,
        }
    }
}

fn estimates(names: &[&str], values: &[f64], sigmas: &[f64]) -> Vec<ParamEstimate> {
    names
        .iter()
        .zip(values.iter().zip(sigmas))
        .map(|(n, (&value, &sigma))| ParamEstimate { name: n.to_string(), value, sigma })
        .collect()
}

pub fn lorentzian(x: f64, center: f64, fwhm: f64, area: f64, offset: f64) -> f64 {
    let h = 0.5 * fwhm;
    let d = x - center;
    offset + area / PI * h / (d * d + h * h)
}

pub fn fano(x: f64, center: f64, fwhm: f64, height: f64, inverse_q: f64, offset: f64) -> f64 {
    let h = 0.5 * fwhm;
    let d = x - center;
    offset + height * (h + inverse_q * d).powi(2) / (h * h + d * d)
}

struct LorentzProblem<'a> {
    x: &'a [f64],
    y: &'a [f64],
}

impl Problem for LorentzProblem<'_> {
    fn residual_count(&self) -> usize {
        self.x.len()
    }
    fn param_count(&self) -> usize {
        4
    }
    fn eval(&self, p: &[f64], r: &mut DVector<f64>, jac: Option<&mut DMatrix<f64>>) {
        let (x0, w, a, b) = (p[0], p[1], p[2], p[3]);
        let h = 0.5 * w;
        for (i, &x) in self.x.iter().enumerate() {
            r[i] = lorentzian(x, x0, w, a, b) - self.y[i];
        }
        if let Some(j) = jac {
            for (i, &x) in self.x.iter().enumerate() {
                let d = x - x0;
                let den = d * d + h * h;
                j[(i, 0)] = a * h / PI * 2.0 * d / (den * den);
                j[(i, 1)] = a / PI * 0.5 * (den - 2.0 * h * h) / (den * den);
                j[(i, 2)] = h / (PI * den);
                j[(i, 3)] = 1.0;
            }
        }
    }
}

struct FanoProblem<'a> {
    x: &'a [f64],
    y: &'a [f64],
}

impl Problem for FanoProblem<'_> {
    fn residual_count(&self) -> usize {
        self.x.len()
    }
    fn param_count(&self) -> usize {
        5
    }
    fn eval(&self, p: &[f64], r: &mut DVector<f64>, jac: Option<&mut DMatrix<f64>>) {
        let (x0, w, bh, eps, b) = (p[0], p[1], p[2], p[3], p[4]);
        let h = 0.5 * w;
        for (i, &x) in self.x.iter().enumerate() {
            r[i] = fano(x, x0, w, bh, eps, b) - self.y[i];
        }
        if let Some(j) = jac {
            for (i, &x) in self.x.iter().enumerate() {
                let d = x - x0;
                let u = h + eps * d;
                let num = u * u;
                let den = h * h + d * d;
                let dy_dd = bh * (2.0 * eps * u * den - num * 2.0 * d) / (den * den);
                let dy_dh = bh * (2.0 * u * den - num * 2.0 * h) / (den * den);
                j[(i, 0)] = -dy_dd;
                j[(i, 1)] = 0.5 * dy_dh;
                j[(i, 2)] = num / den;
                j[(i, 3)] = bh * 2.0 * u * d / den;
                j[(i, 4)] = 1.0;
            }
        }
    }
}

fn rms(ssr: f64, n: usize) -> f64 {
    (ssr / n as f64).sqrt()
}

/// Initial Lorentzian parameters in scaled coordinates: baseline from the
/// median, peak at the largest deviation, width from the half-height
/// crossings.
fn auto_guess(xs: &[f64], ys: &[f64]) -> [f64; 4] {
    let base = median(ys);
    let peak = (0..ys.len())
        .max_by(|&i, &j| (ys[i] - base).abs().total_cmp(&(ys[j] - base).abs()))
        .unwrap_or(0);
    let width = half_max_width(xs, ys, base, peak).filter(|w| *w > 0.0).unwrap_or(0.1);
    let height = ys[peak] - base;
    [xs[peak], width, height * PI * width / 2.0, base]
}

/// Lorentzian least-squares fit. Without `init` the start point comes from
/// the peak location, half-maximum crossings and median baseline.
pub fn fit_lorentzian(x: &[f64], y: &[f64], init: Option<LorentzianGuess>) -> Result<LorentzianFit> {
    check_xy(x, y, 5)?;
    let s = Scaling::new(x, y)?;
    let (xs, ys) = (s.x(x), s.y(y));
    let p0 = match init {
        Some(g) => [
            (g.center - s.x_mid) / s.x_span,
            g.fwhm / s.x_span,
            g.area / (s.x_span * s.y_scale),
            g.offset / s.y_scale,
        ],
        None => auto_guess(&xs, &ys),
    };
    let out = solve(&LorentzProblem { x: &xs, y: &ys }, &p0, LmOptions::default())?;
    let mut p = out.params.clone();
    // the model is invariant under (w, A) → (−w, −A)
    if p[1] < 0.0 {
        p[1] = -p[1];
        p[2] = -p[2];
    }
    let fit = LorentzianFit {
        center: s.x_mid + s.x_span * p[0],
        fwhm: s.x_span * p[1],
        area: s.x_span * s.y_scale * p[2],
        offset: s.y_scale * p[3],
        uncertainties: [
            s.x_span * sigma(&out.covariance, 0),
            s.x_span * sigma(&out.covariance, 1),
            s.x_span * s.y_scale * sigma(&out.covariance, 2),
            s.y_scale * sigma(&out.covariance, 3),
        ],
        residual_rms: s.y_scale * rms(out.ssr, x.len()),
        iterations: out.iterations,
        converged: out.converged,
    };
    let span = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - x.iter().cloned().fold(f64::INFINITY, f64::min);
    if span < 2.0 * fit.fwhm {
        log::warn!("fit window spans fewer than two linewidths");
    }
    Ok(fit)
}

/// Fano least-squares fit; without `init` the fit is started from the
/// Lorentzian guess at several asymmetries and the best result is kept.
/// The returned branch has a non-negative resonant height `B` unless the
/// line is a symmetric dip.
pub fn fit_fano(x: &[f64], y: &[f64], init: Option<FanoGuess>) -> Result<FanoFit> {
    check_xy(x, y, 6)?;
    let s = Scaling::new(x, y)?;
    let (xs, ys) = (s.x(x), s.y(y));
    let problem = FanoProblem { x: &xs, y: &ys };
    let starts: Vec<[f64; 5]> = match init {
        Some(g) => vec![[
            (g.center - s.x_mid) / s.x_span,
            g.fwhm / s.x_span,
            g.height / s.y_scale,
            g.inverse_q,
            g.offset / s.y_scale,
        ]],
        None => {
            let [x0, w, a, b] = auto_guess(&xs, &ys);
            let height = 2.0 * a / (PI * w);
            [-1.0, -0.5, -0.2, 0.0, 0.2, 0.5, 1.0]
                .iter()
                .map(|&eps| [x0, w, height, eps, b])
                .collect()
        }
    };
    let mut best: Option<super::LmOutcome> = None;
    let mut last_err = None;
    for p0 in &starts {
        match solve(&problem, p0, LmOptions::default()) {
            Ok(out) => {
                if best.as_ref().map_or(true, |b| out.ssr < b.ssr) {
                    best = Some(out);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    let mut out = match best {
        Some(b) => b,
        None => return Err(last_err.expect("at least one start")),
    };
    // (B, ε, b) and (−Bε², −1/ε, b + B(1 + ε²)) describe the same curve;
    // report the branch with a positive resonant height
    let (w, bh, eps) = (out.params[1], out.params[2], out.params[3] * out.params[1].signum());
    if bh < 0.0 && eps != 0.0 {
        let p0 = [out.params[0], w.abs(), -bh * eps * eps, -1.0 / eps, out.params[4] + bh * (1.0 + eps * eps)];
        out = solve(&problem, &p0, LmOptions::default())?;
    }
    let mut p = out.params.clone();
    // invariant under (w, ε) → (−w, −ε)
    let sign = if p[1] < 0.0 { -1.0 } else { 1.0 };
    p[1] *= sign;
    p[3] *= sign;
    let c = &out.covariance;
    let h = 0.5 * p[1];
    let area_n = PI * p[2] * h * (1.0 - p[3] * p[3]);
    let area_grad = [
        0.0,
        sign * 0.5 * PI * p[2] * (1.0 - p[3] * p[3]),
        PI * h * (1.0 - p[3] * p[3]),
        sign * -2.0 * PI * p[2] * h * p[3],
        0.0,
    ];
    let inverse_q = p[3];
    Ok(FanoFit {
        center: s.x_mid + s.x_span * p[0],
        fwhm: s.x_span * p[1],
        area: s.x_span * s.y_scale * area_n,
        offset: s.y_scale * p[4],
        q: if inverse_q == 0.0 { f64::INFINITY } else { 1.0 / inverse_q },
        inverse_q,
        height: s.y_scale * p[2],
        uncertainties: [
            s.x_span * sigma(c, 0),
            s.x_span * sigma(c, 1),
            s.x_span * s.y_scale * propagate(c, &area_grad),
            s.y_scale * sigma(c, 4),
            sigma(c, 3),
        ],
        residual_rms: s.y_scale * rms(out.ssr, x.len()),
        iterations: out.iterations,
        converged: out.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn exact_lorentzian_recovery() {
        let x = grid(-400e3, 400e3, 401);
        let area = 0.57 * PI * 36.6e3 / 2.0;
        let y: Vec<f64> = x.iter().map(|&v| lorentzian(v, 0.0, 36.6e3, area, 3.0)).collect();
        let fit = fit_lorentzian(&x, &y, None).unwrap();
        assert!(fit.center.abs() < 1e-8 * 36.6e3);
        assert!((fit.fwhm / 36.6e3 - 1.0).abs() < 1e-8);
        assert!((fit.area / area - 1.0).abs() < 1e-8);
        assert!((fit.offset / 3.0 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn exact_fano_recovery() {
        let x = grid(-5.0, 7.0, 301);
        let (q, w, a) = (1.5, 0.8, 0.3);
        let y: Vec<f64> = x.iter().map(|&v| fano(v, 0.7, w, a * q * q, 1.0 / q, 2.0)).collect();
        let fit = fit_fano(&x, &y, None).unwrap();
        assert!((fit.q / q - 1.0).abs() < 1e-8, "{}", fit.q);
        assert!((fit.fwhm / w - 1.0).abs() < 1e-8);
        assert!((fit.center - 0.7).abs() < 1e-8);
    }

    #[test]
    fn fano_on_lorentzian_data_is_nearly_symmetric() {
        let x = grid(-10.0, 10.0, 201);
        let y: Vec<f64> = x.iter().map(|&v| lorentzian(v, 0.5, 1.2, 2.0, 0.1)).collect();
        let fit = fit_fano(&x, &y, None).unwrap();
        assert!(fit.inverse_q.abs() < 0.05);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fit_lorentzian(&[1.0; 6], &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], None).is_err());
        assert!(fit_lorentzian(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], &[2.0; 6], None).is_err());
        assert!(fit_lorentzian(&[1.0, 2.0], &[2.0, 3.0], None).is_err());
    }
}
