//! Error type shared by parsers and serializers.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    /// A line failed to parse or violated a field constraint.
    #[error("{path}:{line}: {message}")]
    Malformed { path: String, line: u32, message: String },

    /// The same id appeared twice in one file.
    #[error("{path}:{line}: duplicate id '{id}' (first seen at line {first})")]
    DuplicateId { path: String, line: u32, id: String, first: u32 },

    /// Refusal to write a triple whose validation verdict is not accepted.
    #[error("triple '{id}' did not pass validation, refusing to serialize it")]
    UnvalidatedTriple { id: String },

    /// A record violated a structural invariant.
    #[error("record '{id}': {message}")]
    InvalidRecord { id: String, message: String },

    #[error("{0}")]
    InvalidValue(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CoreError {
    pub fn malformed(path: &str, line: u32, message: impl Into<String>) -> Self {
        CoreError::Malformed { path: path.to_string(), line, message: message.into() }
    }
}
