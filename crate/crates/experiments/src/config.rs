//! Loading device configs with command-line overrides.

use saw_transducer::device::{parse_config, DeviceParams};

use crate::{ExperimentError, Result};

/// The shipped reference device.
pub const REFERENCE_CONFIG: &str = include_str!("../../../device_reference.cfg");

/// Splits `key=value`.
pub fn parse_override(s: &str) -> Result<(String, String)> {
    let (k, v) = s.split_once('=').ok_or_else(|| ExperimentError::Override(s.to_string()))?;
    let (k, v) = (k.trim(), v.trim());
    if k.is_empty() || v.is_empty() {
        return Err(ExperimentError::Override(s.to_string()));
    }
    Ok((k.to_string(), v.to_string()))
}

fn line_key(line: &str) -> Option<&str> {
    let content = line.split('#').next()?;
    content.split_once('=').map(|(k, _)| k.trim())
}

/// Config text with every overridden key replaced by `key = value`.
pub fn apply_overrides(text: &str, overrides: &[(String, String)]) -> String {
    let mut out: String = text
        .lines()
        .filter(|line| !line_key(line).is_some_and(|k| overrides.iter().any(|(o, _)| o == k)))
        .flat_map(|line| [line, "\n"])
        .collect();
    for (k, v) in overrides {
        out.push_str(&format!("{k} = {v}\n"));
    }
    out
}

/// Effective config text and its parsed parameters.
pub fn load(text: &str, overrides: &[(String, String)]) -> Result<(String, DeviceParams)> {
    let effective = if overrides.is_empty() { text.to_string() } else { apply_overrides(text, overrides) };
    let params = parse_config(&effective)?;
    Ok((effective, params))
}

pub fn reference() -> DeviceParams {
    parse_config(REFERENCE_CONFIG).expect("shipped config parses")
}
