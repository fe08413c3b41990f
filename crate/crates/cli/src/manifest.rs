//! Run manifest: what was run, on which inputs, when.

use std::fs;
use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};
use globus_core::ingest::resolve_input;
use globus_core::Dataset;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub engine_version: String,
    pub timestamp: String,
    pub scenarios: Vec<String>,
    pub cell_count: usize,
}

impl RunManifest {
    pub fn new(config_path: &Path, dataset: &Dataset) -> std::io::Result<Self> {
        Ok(Self {
            config_hash: config_hash(config_path, dataset)?,
            engine_version: globus_core::ENGINE_VERSION.to_string(),
            timestamp: timestamp(),
            scenarios: dataset.scenarios.iter().map(|s| s.to_string()).collect(),
            cell_count: dataset.cells().len(),
        })
    }
}

/// SHA-256 over the resolved config, the raw config bytes and every input
/// file, each framed by a label and its length.
pub fn config_hash(config_path: &Path, dataset: &Dataset) -> std::io::Result<String> {
    let mut h = Sha256::new();
    let mut frame = |label: &str, bytes: &[u8]| {
        h.update((label.len() as u64).to_le_bytes());
        h.update(label.as_bytes());
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    };
    let resolved = serde_json::to_vec(&dataset.config).map_err(std::io::Error::other)?;
    frame("resolved_config", &resolved);
    frame("config", &fs::read(config_path)?);
    let base = config_path.parent().unwrap_or(Path::new("."));
    for (role, rel) in dataset.config.files.entries() {
        frame(role, &fs::read(resolve_input(base, rel))?);
    }
    Ok(hex::encode(h.finalize()))
}

/// Current UTC time, or `SOURCE_DATE_EPOCH` when set, as ISO-8601.
pub fn timestamp() -> String {
    let at = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0))
        .unwrap_or_else(Utc::now);
    at.to_rfc3339_opts(SecondsFormat::Secs, true)
}
