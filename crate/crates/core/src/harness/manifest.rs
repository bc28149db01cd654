use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::ExperimentConfig;
use crate::error::Result;

/// Bumped whenever a CSV column set changes.
pub const CSV_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command_line: String,
    /// First 8 bytes of SHA-256 over the resolved configuration JSON, hex.
    pub config_digest: String,
    pub master_seed: u64,
    pub tool_version: String,
    pub timestamp: String,
    pub csv_schema_version: u32,
    pub outputs: Vec<String>,
    pub config: ExperimentConfig,
}

pub fn config_digest(cfg: &ExperimentConfig) -> Result<String> {
    let canonical = serde_json::to_vec(cfg)?;
    let hash = Sha256::digest(&canonical);
    let mut word = [0u8; 8];
    word.copy_from_slice(&hash[..8]);
    Ok(format!("{:016x}", u64::from_be_bytes(word)))
}

impl RunManifest {
    pub fn new(command_line: &str, cfg: &ExperimentConfig, outputs: Vec<String>) -> Result<Self> {
        Ok(Self {
            command_line: command_line.to_string(),
            config_digest: config_digest(cfg)?,
            master_seed: cfg.master_seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            csv_schema_version: CSV_SCHEMA_VERSION,
            outputs,
            config: cfg.clone(),
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}
