use codeplan_core::CoreError;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("invalid generation request: {0}")]
    Spec(String),

    #[error("{0}")]
    EmptyInput(String),

    #[error("boolean expression error at byte {offset}: {message}")]
    BoolSyntax { offset: usize, message: String },

    #[error("bracket sequence error at byte {offset}: {message}")]
    DyckSyntax { offset: usize, message: String },

    #[error("gave up after {attempts} attempts to draw item {index} without leaking its answer")]
    Exhausted { index: usize, attempts: u32 },

    #[error("{path}:{line}: {message}")]
    Ingest { path: String, line: usize, message: String },

    #[error(transparent)]
    Core(#[from] CoreError),
}
