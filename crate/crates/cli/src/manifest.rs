//! Output directories: data files, the echoed config, the summary and one
//! manifest, written in that order by a single writer.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::commands::Artifact;
use crate::error::CliError;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const CONFIG_FILE: &str = "config.toml";
pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// sha256 of the echoed config.toml.
    pub config_sha256: String,
    pub seed: Option<u64>,
    pub workers: usize,
    pub wall_clock_s: f64,
    /// File name to sha256, excluding the manifest itself.
    pub outputs: BTreeMap<String, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// What a finished command hands to the writer.
pub struct RunOutput<'a> {
    pub command: &'a str,
    pub config_toml: &'a str,
    pub seed: Option<u64>,
    pub workers: usize,
    pub wall_clock_s: f64,
    pub summary: serde_json::Value,
    pub artifacts: Vec<Artifact>,
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> Result<String, CliError> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
    Ok(sha256_hex(bytes))
}

/// Writes everything into `dir`, creating it if needed, and returns the
/// manifest.
pub fn write_run(dir: &Path, run: RunOutput<'_>) -> Result<RunManifest, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut outputs = BTreeMap::new();
    for a in &run.artifacts {
        outputs.insert(a.name.clone(), write(dir, &a.name, &a.bytes)?);
    }
    let config_sha256 = write(dir, CONFIG_FILE, run.config_toml.as_bytes())?;
    outputs.insert(CONFIG_FILE.to_string(), config_sha256.clone());
    let mut summary = serde_json::to_vec_pretty(&run.summary).expect("summaries serialize");
    summary.push(b'\n');
    outputs.insert(SUMMARY_FILE.to_string(), write(dir, SUMMARY_FILE, &summary)?);
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: run.command.to_string(),
        config_sha256,
        seed: run.seed,
        workers: run.workers,
        wall_clock_s: run.wall_clock_s,
        outputs,
    };
    let mut bytes = serde_json::to_vec_pretty(&manifest).expect("manifests serialize");
    bytes.push(b'\n');
    write(dir, MANIFEST_FILE, &bytes)?;
    Ok(manifest)
}

pub fn read_manifest(dir: impl Into<PathBuf>) -> Result<RunManifest, CliError> {
    let path = dir.into().join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::io(&path, std::io::Error::other(e)))
}
