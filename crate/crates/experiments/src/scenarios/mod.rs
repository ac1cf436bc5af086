//! Scenario definitions and the runner that writes their outputs.

mod efficiency;
mod flux;
mod noise;
mod resonator;
mod spectroscopy;
mod stark;

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use saw_transducer::device::DeviceParams;

pub use efficiency::{default_grid, ridge_deviation, RidgeDeviation, DETUNINGS_MHZ};
pub use noise::{noise_pipeline, PipelineResult};
pub use spectroscopy::{spectroscopy_trace, SpectroscopyTrace};

use crate::manifest::{sha256_hex, versions, OutputRecord, RunManifest};
use crate::{ComponentError, ExperimentError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    ResonatorSpectra,
    StarkCalibration,
    EfficiencyMap,
    FluxLine,
    NoisePsd,
    ParametricSpectroscopy,
    SelfCheck,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::ResonatorSpectra,
        Scenario::StarkCalibration,
        Scenario::EfficiencyMap,
        Scenario::FluxLine,
        Scenario::NoisePsd,
        Scenario::ParametricSpectroscopy,
        Scenario::SelfCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::ResonatorSpectra => "resonator-spectra",
            Scenario::StarkCalibration => "stark-calibration",
            Scenario::EfficiencyMap => "efficiency-map",
            Scenario::FluxLine => "flux-line",
            Scenario::NoisePsd => "noise-psd",
            Scenario::ParametricSpectroscopy => "parametric-spectroscopy",
            Scenario::SelfCheck => "self-check",
        }
    }

    /// Whether the scenario draws synthetic noise and therefore needs a seed.
    pub fn uses_noise(self) -> bool {
        matches!(self, Scenario::ResonatorSpectra | Scenario::StarkCalibration | Scenario::NoisePsd)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| ExperimentError::UnknownScenario(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    Relative(f64),
    Absolute(f64),
    /// Reported only.
    Info,
}

/// One extracted number compared against its reference.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub reference: f64,
    pub value: f64,
    pub tolerance: Tolerance,
}

impl Check {
    pub fn new(name: impl Into<String>, reference: f64, value: f64, tolerance: Tolerance) -> Self {
        Self { name: name.into(), reference, value, tolerance }
    }

    /// `None` for informational lines.
    pub fn passed(&self) -> Option<bool> {
        let diff = (self.value - self.reference).abs();
        match self.tolerance {
            Tolerance::Relative(r) => Some(diff <= r * self.reference.abs()),
            Tolerance::Absolute(a) => Some(diff <= a),
            Tolerance::Info => None,
        }
    }

    fn line(&self) -> String {
        let (tol, status) = match (self.tolerance, self.passed()) {
            (Tolerance::Relative(r), Some(ok)) => (format!("±{:.3}%", 100.0 * r), if ok { "PASS" } else { "FAIL" }),
            (Tolerance::Absolute(a), Some(ok)) => (format!("±{a:.3e}"), if ok { "PASS" } else { "FAIL" }),
            _ => ("-".to_string(), "INFO"),
        };
        format!("{:<44} {:>14.6e} {:>14.6e} {:>10} {}", self.name, self.reference, self.value, tol, status)
    }
}

/// Files and checks produced by a scenario.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub files: Vec<(String, String)>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed() != Some(false))
    }

    pub fn summary(&self, scenario: Scenario) -> String {
        let mut s = format!("scenario: {scenario}\n\n");
        s.push_str(&format!("{:<44} {:>14} {:>14} {:>10} status\n", "quantity", "reference", "value", "tolerance"));
        for c in &self.checks {
            s.push_str(&c.line());
            s.push('\n');
        }
        if !self.notes.is_empty() {
            s.push('\n');
            for n in &self.notes {
                s.push_str(&format!("note: {n}\n"));
            }
        }
        s
    }
}

/// Computes a scenario without touching the filesystem.
pub fn compute(scenario: Scenario, p: &DeviceParams, seed: Option<u64>) -> Result<Outcome> {
    let seed = match (seed, scenario.uses_noise()) {
        (Some(s), _) => s,
        (None, false) => 0,
        (None, true) => return Err(ExperimentError::MissingSeed(scenario.name())),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let wrap = |source: ComponentError| ExperimentError::Scenario { scenario: scenario.name(), source };
    match scenario {
        Scenario::ResonatorSpectra => resonator::run(p, &mut rng).map_err(wrap),
        Scenario::StarkCalibration => stark::run(p, &mut rng).map_err(wrap),
        Scenario::EfficiencyMap => efficiency::run(p).map_err(wrap),
        Scenario::FluxLine => flux::run(p).map_err(wrap),
        Scenario::NoisePsd => noise::run(p, &mut rng).map_err(wrap),
        Scenario::ParametricSpectroscopy => spectroscopy::run(p).map_err(wrap),
        Scenario::SelfCheck => Ok(crate::acceptance::outcome(&crate::acceptance::run_all(p))),
    }
}

fn write(path: &Path, contents: &[u8]) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| ExperimentError::Io { path: path.to_path_buf(), source })
}

/// Runs `scenario` on `p` and writes its CSV files, `summary.txt` and
/// `manifest.json` into `out_dir`. `config_text` is hashed into the
/// manifest.
pub fn run(scenario: Scenario, p: &DeviceParams, config_text: &str, out_dir: &Path, seed: Option<u64>) -> Result<RunManifest> {
    let start = Instant::now();
    std::fs::create_dir_all(out_dir).map_err(|source| ExperimentError::Io { path: out_dir.to_path_buf(), source })?;
    let outcome = compute(scenario, p, seed)?;
    let mut outputs = Vec::new();
    for (name, contents) in &outcome.files {
        write(&out_dir.join(name), contents.as_bytes())?;
        outputs.push(OutputRecord { file: name.clone(), sha256: sha256_hex(contents.as_bytes()), bytes: contents.len() });
    }
    let summary = outcome.summary(scenario);
    write(&out_dir.join("summary.txt"), summary.as_bytes())?;
    outputs.push(OutputRecord { file: "summary.txt".into(), sha256: sha256_hex(summary.as_bytes()), bytes: summary.len() });
    let manifest = RunManifest {
        scenario: scenario.name().to_string(),
        config_sha256: sha256_hex(config_text.as_bytes()),
        seed,
        versions: versions(),
        wall_time_s: start.elapsed().as_secs_f64(),
        outputs,
        checks_passed: outcome.all_passed(),
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write(&out_dir.join("manifest.json"), json.as_bytes())?;
    Ok(manifest)
}

/// CSV text from a header and rows of numbers.
pub(crate) fn csv(header: &str, rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = format!("{header}\n");
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(crate::sci).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
