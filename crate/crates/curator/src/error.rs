use codeplan_client::TransportError;
use codeplan_core::CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CuratorError {
    /// Fatal transport conditions that abort a whole batch.
    #[error(transparent)]
    Transport(#[from] TransportError),

    #[error("empty plan")]
    EmptyPlan,

    #[error("pair '{id}' has an empty {field} field")]
    EmptyField { id: String, field: &'static str },

    #[error(
        "no scorer endpoint is configured; information-gain filtering needs \
         teacher-forced scoring, disable the --info-gain flag to curate without it"
    )]
    ScorerUnavailable,

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("inconsistent curation counts: {0}")]
    Stats(String),
}
