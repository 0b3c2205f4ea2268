use codeplan_client::TransportError;
use codeplan_core::CoreError;

#[derive(Debug, thiserror::Error)]
pub enum RunnerError {
    /// Fatal transport conditions that abort a whole run.
    #[error(transparent)]
    Transport(#[from] TransportError),

    #[error("exemplar/mode mismatch: {0}")]
    Mismatch(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{0}")]
    Invalid(String),
}
