//! Fits a model to a CSV trace for the `fit` command.
//!
//! The first column is the abscissa. Lorentzian, Fano and linear fits read
//! one data column; a reflection fit reads either `re, im` or a single `|S|²`
//! column. A header row is skipped when its first field is not a number.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use saw_transducer::fitting::{
    fit_fano, fit_linear, fit_lorentzian, reflection_linewidths, FitReport, ReflectionTrace,
};
use saw_transducer::quantum::C64;

use crate::{ComponentError, ExperimentError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    Lorentzian,
    Fano,
    Linear,
    Reflection,
}

impl FitModel {
    pub const ALL: [FitModel; 4] = [FitModel::Lorentzian, FitModel::Fano, FitModel::Linear, FitModel::Reflection];

    pub fn name(self) -> &'static str {
        match self {
            FitModel::Lorentzian => "lorentzian",
            FitModel::Fano => "fano",
            FitModel::Linear => "linear",
            FitModel::Reflection => "reflection",
        }
    }
}

impl fmt::Display for FitModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FitModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown model `{s}` (expected lorentzian, fano, linear or reflection)"))
    }
}

/// Numeric columns of a CSV source.
pub fn read_columns(source: impl Read) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).comment(Some(b'#')).from_reader(source);
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| ExperimentError::Data(e.to_string()))?;
        let values: std::result::Result<Vec<f64>, _> = record.iter().map(f64::from_str).collect();
        let values = match values {
            Ok(v) => v,
            Err(_) if i == 0 => continue,
            Err(e) => return Err(ExperimentError::Data(format!("row {}: {e}", i + 1))),
        };
        if columns.is_empty() {
            columns = vec![Vec::new(); values.len()];
        }
        if values.len() != columns.len() {
            return Err(ExperimentError::Data(format!("row {} has {} fields, expected {}", i + 1, values.len(), columns.len())));
        }
        for (c, v) in columns.iter_mut().zip(values) {
            c.push(v);
        }
    }
    if columns.len() < 2 {
        return Err(ExperimentError::Data("need at least two numeric columns".into()));
    }
    Ok(columns)
}

pub fn fit_columns(model: FitModel, columns: &[Vec<f64>]) -> Result<FitReport> {
    let wrap = |e: saw_transducer::fitting::FitError| ExperimentError::Scenario { scenario: "fit", source: ComponentError::Fit(e) };
    let x = &columns[0];
    let y = &columns[1];
    match model {
        FitModel::Lorentzian => fit_lorentzian(x, y, None).map(|f| f.report()).map_err(wrap),
        FitModel::Fano => fit_fano(x, y, None).map(|f| f.report()).map_err(wrap),
        FitModel::Linear => fit_linear(x, y).map(|f| f.report()).map_err(wrap),
        FitModel::Reflection => {
            let trace = match columns.len() {
                2 => ReflectionTrace::Magnitude(y.clone()),
                3 => ReflectionTrace::Complex(y.iter().zip(&columns[2]).map(|(&re, &im)| C64::new(re, im)).collect()),
                n => return Err(ExperimentError::Data(format!("reflection needs 2 or 3 columns, got {n}"))),
            };
            reflection_linewidths(x, &trace).map(|f| f.report()).map_err(wrap)
        }
    }
}
