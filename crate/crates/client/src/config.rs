use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::TransportError;

pub const DEFAULT_API_KEY_ENV: &str = "MODEL_API_KEY";

fn default_api_key_env() -> String {
    DEFAULT_API_KEY_ENV.to_string()
}

fn default_timeout_secs() -> u64 {
    60
}

fn default_max_retries() -> u32 {
    3
}

fn default_max_concurrent() -> usize {
    4
}

fn default_backoff_base_ms() -> u64 {
    1_000
}

fn default_backoff_ceiling_ms() -> u64 {
    60_000
}

/// Where and how to reach the model server. The API key itself is never
/// stored here, only the name of the environment variable holding it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServerConfig {
    pub base_url: String,
    pub model: String,
    #[serde(default = "default_api_key_env")]
    pub api_key_env: String,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
    #[serde(default = "default_max_retries")]
    pub max_retries: u32,
    #[serde(default = "default_max_concurrent")]
    pub max_concurrent: usize,
    #[serde(default = "default_backoff_base_ms")]
    pub backoff_base_ms: u64,
    #[serde(default = "default_backoff_ceiling_ms")]
    pub backoff_ceiling_ms: u64,
}

impl ServerConfig {
    pub fn new(base_url: impl Into<String>, model: impl Into<String>) -> Self {
        ServerConfig {
            base_url: base_url.into(),
            model: model.into(),
            api_key_env: default_api_key_env(),
            timeout_secs: default_timeout_secs(),
            max_retries: default_max_retries(),
            max_concurrent: default_max_concurrent(),
            backoff_base_ms: default_backoff_base_ms(),
            backoff_ceiling_ms: default_backoff_ceiling_ms(),
        }
    }

    pub fn validate(&self) -> Result<(), TransportError> {
        let fail = |m: String| Err(TransportError::Config(m));
        if self.base_url.trim().is_empty() {
            return fail("base_url is empty".into());
        }
        if self.model.trim().is_empty() {
            return fail("model is empty".into());
        }
        if self.max_concurrent == 0 {
            return fail("max_concurrent must be at least 1".into());
        }
        if self.backoff_base_ms == 0 {
            return fail("backoff_base_ms must be positive".into());
        }
        if self.backoff_ceiling_ms < self.backoff_base_ms {
            return fail(format!(
                "backoff_ceiling_ms {} is below backoff_base_ms {}",
                self.backoff_ceiling_ms, self.backoff_base_ms
            ));
        }
        Ok(())
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs(self.timeout_secs)
    }
}

fn default_temperature() -> f64 {
    0.7
}

fn default_top_p() -> f64 {
    0.9
}

fn default_max_tokens() -> u32 {
    1_024
}

/// Sampling settings sent with every chat request. Defaults match the
/// annotation setting (temperature 0.7, nucleus p 0.9).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingParams {
    #[serde(default = "default_temperature")]
    pub temperature: f64,
    #[serde(default = "default_top_p")]
    pub top_p: f64,
    #[serde(default = "default_max_tokens")]
    pub max_tokens: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Default for SamplingParams {
    fn default() -> Self {
        SamplingParams {
            temperature: default_temperature(),
            top_p: default_top_p(),
            max_tokens: default_max_tokens(),
            seed: None,
        }
    }
}

impl SamplingParams {
    /// Greedy decoding for reproducible evaluation runs.
    pub fn greedy(max_tokens: u32) -> Self {
        SamplingParams { temperature: 0.0, top_p: 1.0, max_tokens, seed: None }
    }

    pub fn validate(&self) -> Result<(), TransportError> {
        let fail = |m: String| Err(TransportError::Config(m));
        if !(self.temperature >= 0.0) {
            return fail(format!("temperature must be >= 0, got {}", self.temperature));
        }
        if !(self.top_p > 0.0 && self.top_p <= 1.0) {
            return fail(format!("top_p must be in (0, 1], got {}", self.top_p));
        }
        if self.max_tokens == 0 {
            return fail("max_tokens must be positive".into());
        }
        Ok(())
    }
}
