//! Process-level error type carrying the exit code: usage and data
//! problems exit 1, transport problems exit 2.

use codeplan_benchgen::BenchError;
use codeplan_client::TransportError;
use codeplan_core::CoreError;
use codeplan_curator::CuratorError;
use codeplan_metrics::MetricsError;
use codeplan_runner::RunnerError;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config, missing files: the user can fix the call.
    Usage(String),
    /// Inputs parsed but their contents are unusable.
    Data(String),
    /// The model server failed; retrying later may succeed.
    Transport(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Data(_) => 1,
            CliError::Transport(_) => 2,
        }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Usage(format!("cannot access {}: {err}", path.display()))
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Data(m) => write!(f, "error: {m}"),
            CliError::Transport(m) => write!(f, "transport error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Key and endpoint misconfiguration is the user's to fix (exit 1);
/// everything else transport-shaped means the server misbehaved (exit 2).
impl From<TransportError> for CliError {
    fn from(err: TransportError) -> Self {
        match err {
            TransportError::MissingKey { .. } | TransportError::Config(_) => {
                CliError::Usage(err.to_string())
            }
            other => CliError::Transport(other.to_string()),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        CliError::Data(err.to_string())
    }
}

impl From<BenchError> for CliError {
    fn from(err: BenchError) -> Self {
        match err {
            BenchError::Spec(m) => CliError::Usage(m),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<MetricsError> for CliError {
    fn from(err: MetricsError) -> Self {
        CliError::Data(err.to_string())
    }
}

impl From<CuratorError> for CliError {
    fn from(err: CuratorError) -> Self {
        match err {
            CuratorError::Transport(t) => CliError::from(t),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<RunnerError> for CliError {
    fn from(err: RunnerError) -> Self {
        match err {
            RunnerError::Transport(t) => CliError::from(t),
            other => CliError::Data(other.to_string()),
        }
    }
}
