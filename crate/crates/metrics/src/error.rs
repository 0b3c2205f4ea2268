#[derive(Debug, thiserror::Error)]
pub enum MetricsError {
    #[error("traces reference unknown item ids: {}", ids.join(", "))]
    OrphanTraces { ids: Vec<String> },

    #[error("item '{id}' has no hops label")]
    MissingHops { id: String },

    #[error("stage score ids are misaligned: {0}")]
    Misaligned(String),

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Core(#[from] codeplan_core::CoreError),
}
