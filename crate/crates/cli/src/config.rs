//! Layered configuration: built-in defaults, then an optional TOML
//! file, then CODEPLAN_* environment variables, then command flags.
//! Unknown file keys are rejected by name so typos cannot silently
//! fall back to defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use codeplan_client::{SamplingParams, ServerConfig};

use crate::error::CliError;

pub const DEFAULT_BASE_URL: &str = "http://127.0.0.1:8000";
pub const DEFAULT_MODEL: &str = "local";

const TOP_KEYS: &[&str] = &["server", "sampling", "paths", "log_level"];
const SERVER_KEYS: &[&str] = &[
    "base_url",
    "model",
    "api_key_env",
    "timeout_secs",
    "max_retries",
    "concurrency",
    "backoff_base_ms",
    "backoff_ceiling_ms",
];
const SAMPLING_KEYS: &[&str] = &["temperature", "top_p", "max_tokens", "seed"];
const PATHS_KEYS: &[&str] = &["workspace"];

/// File contents with nothing defaulted yet: absent keys stay `None`
/// so per-command defaults can fill them later.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
pub struct FileConfig {
    #[serde(default)]
    pub server: ServerSection,
    #[serde(default)]
    pub sampling: SamplingSection,
    #[serde(default)]
    pub paths: PathsSection,
    #[serde(default)]
    pub log_level: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
pub struct ServerSection {
    pub base_url: Option<String>,
    pub model: Option<String>,
    pub api_key_env: Option<String>,
    pub timeout_secs: Option<u64>,
    pub max_retries: Option<u32>,
    pub concurrency: Option<usize>,
    pub backoff_base_ms: Option<u64>,
    pub backoff_ceiling_ms: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
pub struct SamplingSection {
    pub temperature: Option<f64>,
    pub top_p: Option<f64>,
    pub max_tokens: Option<u32>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
pub struct PathsSection {
    pub workspace: Option<PathBuf>,
}

/// Which sampling defaults apply before file and env overrides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingProfile {
    /// Annotation calls: temperature 0.7, nucleus p 0.9.
    Curation,
    /// Generation and scoring calls: greedy.
    Evaluation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedConfig {
    pub server: ServerConfig,
    pub sampling: SamplingParams,
    pub workspace: PathBuf,
    pub log_level: String,
}

fn collect_unknown(value: &toml::Value, allowed: &[&str], prefix: &str, bad: &mut Vec<String>) {
    if let Some(table) = value.as_table() {
        for key in table.keys() {
            if !allowed.contains(&key.as_str()) {
                bad.push(format!("{prefix}.{key}"));
            }
        }
    }
}

/// Every key the file sets that the format does not define, in file order.
fn unknown_keys(table: &toml::Table) -> Vec<String> {
    let mut bad = Vec::new();
    for (key, value) in table {
        match key.as_str() {
            "server" => collect_unknown(value, SERVER_KEYS, "server", &mut bad),
            "sampling" => collect_unknown(value, SAMPLING_KEYS, "sampling", &mut bad),
            "paths" => collect_unknown(value, PATHS_KEYS, "paths", &mut bad),
            "log_level" => {}
            other => bad.push(other.to_string()),
        }
    }
    bad
}

pub fn parse_file_config(text: &str) -> Result<FileConfig, CliError> {
    let table: toml::Table = text
        .parse()
        .map_err(|e| CliError::Usage(format!("config file is not valid TOML: {e}")))?;
    let bad = unknown_keys(&table);
    if !bad.is_empty() {
        return Err(CliError::Usage(format!(
            "unknown config key{}: {} (known sections: {})",
            if bad.len() == 1 { "" } else { "s" },
            bad.join(", "),
            TOP_KEYS.join(", ")
        )));
    }
    toml::from_str(text).map_err(|e| CliError::Usage(format!("config file rejected: {e}")))
}

fn env_override<T: std::str::FromStr>(
    get: &impl Fn(&str) -> Option<String>,
    name: &str,
    slot: &mut Option<T>,
) -> Result<(), CliError>
where
    T::Err: std::fmt::Display,
{
    if let Some(raw) = get(name) {
        let parsed = raw
            .parse()
            .map_err(|e| CliError::Usage(format!("environment variable {name}={raw:?}: {e}")))?;
        *slot = Some(parsed);
    }
    Ok(())
}

/// Applies CODEPLAN_* variables on top of the file values.
pub fn apply_env(
    config: &mut FileConfig,
    get: impl Fn(&str) -> Option<String>,
) -> Result<(), CliError> {
    env_override(&get, "CODEPLAN_BASE_URL", &mut config.server.base_url)?;
    env_override(&get, "CODEPLAN_MODEL", &mut config.server.model)?;
    env_override(&get, "CODEPLAN_API_KEY_ENV", &mut config.server.api_key_env)?;
    env_override(&get, "CODEPLAN_TIMEOUT_SECS", &mut config.server.timeout_secs)?;
    env_override(&get, "CODEPLAN_MAX_RETRIES", &mut config.server.max_retries)?;
    env_override(&get, "CODEPLAN_CONCURRENCY", &mut config.server.concurrency)?;
    env_override(&get, "CODEPLAN_BACKOFF_BASE_MS", &mut config.server.backoff_base_ms)?;
    env_override(&get, "CODEPLAN_BACKOFF_CEILING_MS", &mut config.server.backoff_ceiling_ms)?;
    env_override(&get, "CODEPLAN_TEMPERATURE", &mut config.sampling.temperature)?;
    env_override(&get, "CODEPLAN_TOP_P", &mut config.sampling.top_p)?;
    env_override(&get, "CODEPLAN_MAX_TOKENS", &mut config.sampling.max_tokens)?;
    env_override(&get, "CODEPLAN_SEED", &mut config.sampling.seed)?;
    env_override(&get, "CODEPLAN_WORKSPACE", &mut config.paths.workspace)?;
    env_override(&get, "CODEPLAN_LOG_LEVEL", &mut config.log_level)?;
    Ok(())
}

/// Reads the optional file and folds in the process environment.
pub fn load_config(path: Option<&Path>) -> Result<FileConfig, CliError> {
    let mut config = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            parse_file_config(&text)?
        }
        None => FileConfig::default(),
    };
    apply_env(&mut config, |name| std::env::var(name).ok())?;
    Ok(config)
}

/// Fills remaining gaps with profile defaults and validates the result.
/// The workspace directory is created when missing.
pub fn resolve(config: &FileConfig, profile: SamplingProfile) -> Result<ResolvedConfig, CliError> {
    let mut server = ServerConfig::new(
        config.server.base_url.clone().unwrap_or_else(|| DEFAULT_BASE_URL.to_string()),
        config.server.model.clone().unwrap_or_else(|| DEFAULT_MODEL.to_string()),
    );
    if let Some(v) = &config.server.api_key_env {
        server.api_key_env = v.clone();
    }
    if let Some(v) = config.server.timeout_secs {
        server.timeout_secs = v;
    }
    if let Some(v) = config.server.max_retries {
        server.max_retries = v;
    }
    if let Some(v) = config.server.concurrency {
        server.max_concurrent = v;
    }
    if let Some(v) = config.server.backoff_base_ms {
        server.backoff_base_ms = v;
    }
    if let Some(v) = config.server.backoff_ceiling_ms {
        server.backoff_ceiling_ms = v;
    }

    let mut sampling = match profile {
        SamplingProfile::Curation => SamplingParams::default(),
        SamplingProfile::Evaluation => SamplingParams::greedy(SamplingParams::default().max_tokens),
    };
    if let Some(v) = config.sampling.temperature {
        sampling.temperature = v;
    }
    if let Some(v) = config.sampling.top_p {
        sampling.top_p = v;
    }
    if let Some(v) = config.sampling.max_tokens {
        sampling.max_tokens = v;
    }
    if let Some(v) = config.sampling.seed {
        sampling.seed = Some(v);
    }

    server.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    sampling.validate().map_err(|e| CliError::Usage(e.to_string()))?;

    let workspace = config.paths.workspace.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&workspace).map_err(|e| CliError::io(&workspace, e))?;

    let log_level = config.log_level.clone().unwrap_or_else(|| "info".to_string());
    Ok(ResolvedConfig { server, sampling, workspace, log_level })
}
