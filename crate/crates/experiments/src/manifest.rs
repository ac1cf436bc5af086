use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub file: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Provenance of one scenario run, written as `manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub scenario: String,
    pub config_sha256: String,
    pub seed: Option<u64>,
    pub versions: BTreeMap<String, String>,
    pub wall_time_s: f64,
    pub outputs: Vec<OutputRecord>,
    /// True when every pass/fail check in the summary passed.
    pub checks_passed: bool,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub fn versions() -> BTreeMap<String, String> {
    BTreeMap::from([
        ("saw-transducer".to_string(), saw_transducer::VERSION.to_string()),
        ("transducer-experiments".to_string(), env!("CARGO_PKG_VERSION").to_string()),
    ])
}
