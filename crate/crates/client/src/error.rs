#[derive(Debug, Clone, thiserror::Error)]
pub enum TransportError {
    #[error("authentication rejected with status {status}; check the key in ${env}")]
    Auth { status: u16, env: String },

    #[error("environment variable {env} is not set (it must hold the API key)")]
    MissingKey { env: String },

    #[error("server returned status {status}: {message}")]
    Status { status: u16, message: String },

    #[error("network error: {message}")]
    Network { message: String },

    #[error("{endpoint} returned no per-token logprobs; scoring needs an echo+logprobs capable endpoint")]
    Capability { endpoint: String },

    #[error("malformed server response: {0}")]
    Protocol(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl TransportError {
    /// Transient errors worth retrying: network failures, rate limits,
    /// and server-side 5xx. Everything else is permanent.
    pub fn is_retryable(&self) -> bool {
        match self {
            TransportError::Network { .. } => true,
            TransportError::Status { status, .. } => *status == 429 || *status >= 500,
            _ => false,
        }
    }

    /// Errors that should abort a whole batch rather than fail one record.
    pub fn is_fatal(&self) -> bool {
        matches!(
            self,
            TransportError::Auth { .. }
                | TransportError::MissingKey { .. }
                | TransportError::Config(_)
        )
    }

    /// HTTP status carried by the error, when there is one.
    pub fn status_code(&self) -> Option<u16> {
        match self {
            TransportError::Auth { status, .. } | TransportError::Status { status, .. } => {
                Some(*status)
            }
            _ => None,
        }
    }
}
