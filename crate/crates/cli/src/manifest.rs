//! Sidecar manifests. Every file the tool writes gets a record beside
//! it holding the command, config hash, seeds, and counts; the record
//! carries no timestamp, so identical runs produce identical bytes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use codeplan_client::{SamplingParams, ServerConfig};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool_version: String,
    /// argv after the binary name, exactly as invoked.
    pub command: Vec<String>,
    /// sha256 over the resolved server and sampling configuration.
    pub config_hash: String,
    /// Explicit seeds in play, empty when the command uses none.
    pub seeds: Vec<u64>,
    pub inputs: Vec<String>,
    pub output: String,
    pub counts: BTreeMap<String, u64>,
}

impl Manifest {
    pub fn new(
        command: &[String],
        config_hash: String,
        seeds: Vec<u64>,
        inputs: Vec<String>,
        output: &Path,
        counts: BTreeMap<String, u64>,
    ) -> Self {
        Manifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_vec(),
            config_hash,
            seeds,
            inputs,
            output: output.display().to_string(),
            counts,
        }
    }
}

/// `<output>.manifest.json`, next to the output file.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}

/// Hex sha256 of the resolved configuration. The api key itself never
/// enters: only the environment variable name is part of the config.
pub fn config_hash(server: &ServerConfig, sampling: &SamplingParams) -> String {
    let body = serde_json::to_string(&(server, sampling)).expect("config serializes");
    let digest = Sha256::digest(body.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn write_manifest(manifest: &Manifest, output: &Path) -> Result<PathBuf, CliError> {
    let path = manifest_path(output);
    let mut body = serde_json::to_string_pretty(manifest)
        .map_err(|e| CliError::Data(format!("manifest serialization failed: {e}")))?;
    body.push('\n');
    std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}
