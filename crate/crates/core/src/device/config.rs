//! Flat `key = value unit` text format for [`DeviceParams`].
//!
//! One entry per line, `#` starts a comment. Units are checked against the
//! dimension each key expects and converted to base units (Hz, F, m², V, K,
//! kg/m³, m/s, 1/Hz, Hz/√mW). Amplifier stages are `amplifier.<name> = <gain> dB`
//! and keep their file order. The writer emits base units with shortest
//! round-trip float formatting, so `parse(write(p)) == p` exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::params::*;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("line {line}: unit `{unit}` does not fit `{key}` (expects {expected})")]
    Unit { line: usize, key: String, unit: String, expected: &'static str },
    #[error("missing key `{0}`")]
    Missing(&'static str),
    #[error(transparent)]
    Invalid(#[from] super::DeviceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dim {
    Frequency,
    Capacitance,
    Area,
    Voltage,
    Temperature,
    Density,
    Velocity,
    Count,
    Ratio,
    InverseFrequency,
    Calibration,
    Gain,
}

impl Dim {
    fn describe(self) -> &'static str {
        match self {
            Dim::Frequency => "a frequency (Hz, kHz, MHz, GHz)",
            Dim::Capacitance => "a capacitance (F, pF, fF, aF)",
            Dim::Area => "an area (m2, mm2, um2)",
            Dim::Voltage => "a voltage (V, mV, uV, nV)",
            Dim::Temperature => "a temperature (K, mK, uK)",
            Dim::Density => "a density (kg/m3, g/cm3)",
            Dim::Velocity => "a velocity (m/s, km/s)",
            Dim::Count => "a plain count",
            Dim::Ratio => "a dimensionless number",
            Dim::InverseFrequency => "an inverse frequency (1/Hz, 1/MHz, 1/GHz)",
            Dim::Calibration => "Hz/sqrt(mW), MHz/sqrt(mW) or GHz/sqrt(mW)",
            Dim::Gain => "a gain in dB",
        }
    }

    fn base_unit(self) -> &'static str {
        match self {
            Dim::Frequency => "Hz",
            Dim::Capacitance => "F",
            Dim::Area => "m2",
            Dim::Voltage => "V",
            Dim::Temperature => "K",
            Dim::Density => "kg/m3",
            Dim::Velocity => "m/s",
            Dim::Count | Dim::Ratio => "",
            Dim::InverseFrequency => "1/Hz",
            Dim::Calibration => "Hz/sqrt(mW)",
            Dim::Gain => "dB",
        }
    }

    fn scale(self, unit: &str) -> Option<f64> {
        let u = unit.replace(['μ', 'µ'], "u");
        let s = match (self, u.as_str()) {
            (Dim::Count | Dim::Ratio, "") => 1.0,
            (Dim::Frequency, "Hz") => 1.0,
            (Dim::Frequency, "kHz") => 1e3,
            (Dim::Frequency, "MHz") => 1e6,
            (Dim::Frequency, "GHz") => 1e9,
            (Dim::Capacitance, "F") => 1.0,
            (Dim::Capacitance, "pF") => 1e-12,
            (Dim::Capacitance, "fF") => 1e-15,
            (Dim::Capacitance, "aF") => 1e-18,
            (Dim::Area, "m2") => 1.0,
            (Dim::Area, "mm2") => 1e-6,
            (Dim::Area, "um2") => 1e-12,
            (Dim::Voltage, "V") => 1.0,
            (Dim::Voltage, "mV") => 1e-3,
            (Dim::Voltage, "uV") => 1e-6,
            (Dim::Voltage, "nV") => 1e-9,
            (Dim::Temperature, "K") => 1.0,
            (Dim::Temperature, "mK") => 1e-3,
            (Dim::Temperature, "uK") => 1e-6,
            (Dim::Density, "kg/m3") => 1.0,
            (Dim::Density, "g/cm3") => 1e3,
            (Dim::Velocity, "m/s") => 1.0,
            (Dim::Velocity, "km/s") => 1e3,
            (Dim::InverseFrequency, "1/Hz" | "s") => 1.0,
            (Dim::InverseFrequency, "1/kHz") => 1e-3,
            (Dim::InverseFrequency, "1/MHz") => 1e-6,
            (Dim::InverseFrequency, "1/GHz") => 1e-9,
            (Dim::Calibration, "Hz/sqrt(mW)") => 1.0,
            (Dim::Calibration, "kHz/sqrt(mW)") => 1e3,
            (Dim::Calibration, "MHz/sqrt(mW)") => 1e6,
            (Dim::Calibration, "GHz/sqrt(mW)") => 1e9,
            (Dim::Gain, "dB") => 1.0,
            _ => return None,
        };
        Some(s)
    }
}

const KEYS: &[(&str, Dim)] = &[
    ("transmon.e_c", Dim::Frequency),
    ("transmon.e_j", Dim::Frequency),
    ("transmon.omega_e", Dim::Frequency),
    ("transmon.omega_f", Dim::Frequency),
    ("transmon.kappa_f", Dim::Frequency),
    ("mw.omega", Dim::Frequency),
    ("mw.linewidth_total", Dim::Frequency),
    ("mw.linewidth_external", Dim::Frequency),
    ("mw.ports", Dim::Count),
    ("saw.omega", Dim::Frequency),
    ("saw.linewidth_total", Dim::Frequency),
    ("saw.linewidth_external", Dim::Frequency),
    ("saw.ports", Dim::Count),
    ("coupling.g_mw", Dim::Frequency),
    ("coupling.g_saw", Dim::Frequency),
    ("geometry.c_idt", Dim::Capacitance),
    ("geometry.c_total", Dim::Capacitance),
    ("geometry.mode_area", Dim::Area),
    ("geometry.phi0", Dim::Voltage),
    ("geometry.density", Dim::Density),
    ("geometry.sound_velocity", Dim::Velocity),
    ("geometry.depth_wavelengths", Dim::Ratio),
    ("drive.mw.amplitude", Dim::Frequency),
    ("drive.saw.amplitude", Dim::Frequency),
    ("drive.detuning", Dim::Frequency),
    ("drive.mw.calibration", Dim::Calibration),
    ("drive.saw.calibration", Dim::Calibration),
    ("drive.mw.stark", Dim::InverseFrequency),
    ("drive.saw.stark", Dim::InverseFrequency),
    ("drive.saw_pull", Dim::Frequency),
    ("noise.floor", Dim::Ratio),
    ("noise.t_bath_low", Dim::Temperature),
    ("noise.t_bath_high", Dim::Temperature),
    ("noise.t_eff_low", Dim::Temperature),
    ("noise.t_eff_high", Dim::Temperature),
];

const OPTIONAL: &[&str] = &["drive.mw.stark", "drive.saw.stark"];

fn dim_of(key: &str) -> Option<Dim> {
    if key.starts_with("amplifier.") && key.len() > "amplifier.".len() {
        return Some(Dim::Gain);
    }
    KEYS.iter().find(|(k, _)| *k == key).map(|&(_, d)| d)
}

/// Parses the text format into validated device parameters.
pub fn parse_config(text: &str) -> Result<DeviceParams, ConfigError> {
    let mut values: BTreeMap<String, f64> = BTreeMap::new();
    let mut amplifiers = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, rhs) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::Syntax { line, reason: "expected `key = value unit`".into() })?;
        let key = key.trim();
        let mut parts = rhs.split_whitespace();
        let number = parts
            .next()
            .ok_or_else(|| ConfigError::Syntax { line, reason: format!("`{key}` has no value") })?;
        let number: f64 = number
            .parse()
            .map_err(|_| ConfigError::Syntax { line, reason: format!("`{number}` is not a number") })?;
        let unit = parts.collect::<Vec<_>>().join("");
        let dim = dim_of(key).ok_or_else(|| ConfigError::UnknownKey { line, key: key.to_string() })?;
        let scale = dim.scale(&unit).ok_or_else(|| ConfigError::Unit {
            line,
            key: key.to_string(),
            unit: unit.clone(),
            expected: dim.describe(),
        })?;
        let value = number * scale;
        if dim == Dim::Count && (value < 0.0 || value.fract() != 0.0) {
            return Err(ConfigError::Syntax { line, reason: format!("`{key}` must be a whole number") });
        }
        if let Some(name) = key.strip_prefix("amplifier.") {
            if amplifiers.iter().any(|(n, _): &(String, f64)| n == name) {
                return Err(ConfigError::Duplicate { line, key: key.to_string() });
            }
            amplifiers.push((name.to_string(), value));
        } else if values.insert(key.to_string(), value).is_some() {
            return Err(ConfigError::Duplicate { line, key: key.to_string() });
        }
    }
    for (k, _) in KEYS {
        if !OPTIONAL.contains(k) && !values.contains_key(*k) {
            return Err(ConfigError::Missing(k));
        }
    }
    let v = |k: &str| values[k];
    let stark_override = match (values.get("drive.mw.stark"), values.get("drive.saw.stark")) {
        (Some(&a), Some(&b)) => Some([a, b]),
        (None, None) => None,
        _ => return Err(ConfigError::Missing("drive.mw.stark and drive.saw.stark (set both or neither)")),
    };
    let params = DeviceParams {
        transmon: TransmonParams {
            e_c: v("transmon.e_c"),
            e_j: v("transmon.e_j"),
            omega_e: v("transmon.omega_e"),
            omega_f: v("transmon.omega_f"),
            kappa_f: v("transmon.kappa_f"),
        },
        mw: ResonatorParams {
            omega: v("mw.omega"),
            linewidth_total: v("mw.linewidth_total"),
            linewidth_external: v("mw.linewidth_external"),
            ports: v("mw.ports") as u32,
        },
        saw: ResonatorParams {
            omega: v("saw.omega"),
            linewidth_total: v("saw.linewidth_total"),
            linewidth_external: v("saw.linewidth_external"),
            ports: v("saw.ports") as u32,
        },
        coupling: CouplingParams { g_mw: v("coupling.g_mw"), g_saw: v("coupling.g_saw") },
        geometry: GeometryParams {
            c_idt: v("geometry.c_idt"),
            c_total: v("geometry.c_total"),
            mode_area: v("geometry.mode_area"),
            phi0: v("geometry.phi0"),
            density: v("geometry.density"),
            sound_velocity: v("geometry.sound_velocity"),
            depth_wavelengths: v("geometry.depth_wavelengths"),
        },
        drive: DriveSettings {
            amplitude_mw: v("drive.mw.amplitude"),
            amplitude_saw: v("drive.saw.amplitude"),
            detuning: v("drive.detuning"),
            calibration_mw: v("drive.mw.calibration"),
            calibration_saw: v("drive.saw.calibration"),
            stark_override,
            saw_pull_per_phonon: v("drive.saw_pull"),
        },
        noise: NoiseSettings {
            floor: v("noise.floor"),
            t_bath_low: v("noise.t_bath_low"),
            t_bath_high: v("noise.t_bath_high"),
            t_eff_low: v("noise.t_eff_low"),
            t_eff_high: v("noise.t_eff_high"),
            amplifiers,
        },
    };
    params.validate()?;
    Ok(params)
}

/// Writes parameters in base units; the output parses back to an identical
/// value.
pub fn write_config(p: &DeviceParams) -> String {
    let mut values: Vec<(&str, f64)> = vec![
        ("transmon.e_c", p.transmon.e_c),
        ("transmon.e_j", p.transmon.e_j),
        ("transmon.omega_e", p.transmon.omega_e),
        ("transmon.omega_f", p.transmon.omega_f),
        ("transmon.kappa_f", p.transmon.kappa_f),
        ("mw.omega", p.mw.omega),
        ("mw.linewidth_total", p.mw.linewidth_total),
        ("mw.linewidth_external", p.mw.linewidth_external),
        ("mw.ports", p.mw.ports as f64),
        ("saw.omega", p.saw.omega),
        ("saw.linewidth_total", p.saw.linewidth_total),
        ("saw.linewidth_external", p.saw.linewidth_external),
        ("saw.ports", p.saw.ports as f64),
        ("coupling.g_mw", p.coupling.g_mw),
        ("coupling.g_saw", p.coupling.g_saw),
        ("geometry.c_idt", p.geometry.c_idt),
        ("geometry.c_total", p.geometry.c_total),
        ("geometry.mode_area", p.geometry.mode_area),
        ("geometry.phi0", p.geometry.phi0),
        ("geometry.density", p.geometry.density),
        ("geometry.sound_velocity", p.geometry.sound_velocity),
        ("geometry.depth_wavelengths", p.geometry.depth_wavelengths),
        ("drive.mw.amplitude", p.drive.amplitude_mw),
        ("drive.saw.amplitude", p.drive.amplitude_saw),
        ("drive.detuning", p.drive.detuning),
        ("drive.mw.calibration", p.drive.calibration_mw),
        ("drive.saw.calibration", p.drive.calibration_saw),
    ];
    if let Some([a, b]) = p.drive.stark_override {
        values.push(("drive.mw.stark", a));
        values.push(("drive.saw.stark", b));
    }
    values.extend([
        ("drive.saw_pull", p.drive.saw_pull_per_phonon),
        ("noise.floor", p.noise.floor),
        ("noise.t_bath_low", p.noise.t_bath_low),
        ("noise.t_bath_high", p.noise.t_bath_high),
        ("noise.t_eff_low", p.noise.t_eff_low),
        ("noise.t_eff_high", p.noise.t_eff_high),
    ]);
    let mut out = String::new();
    for (key, value) in values {
        let unit = dim_of(key).map(Dim::base_unit).unwrap_or("");
        let _ = writeln!(out, "{key} = {value:?} {unit}");
    }
    for (name, gain) in &p.noise.amplifiers {
        let _ = writeln!(out, "amplifier.{name} = {gain:?} dB");
    }
    out
}
