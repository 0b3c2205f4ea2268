//! Few-shot benchmark runner: prompt assembly, generation in three
//! inference modes, teacher-forced scoring, and resumable runs.
//!
//! Plan-rendering modes produce the plan and the response in a single
//! continuation, split at the close of the first fenced block so
//! inference matches the training layout where the plan immediately
//! precedes the response. Direct mode takes the whole continuation as
//! the response. Scoring returns summed and per-token mean NLLs of a
//! target sequence under a fixed context.

pub mod bench;
pub mod error;
pub mod fewshot;
pub mod generate;
pub mod prompt;
pub mod score;

pub use bench::{existing_trace_ids, run_benchmark, RunSummary};
pub use error::RunnerError;
pub use fewshot::{load_fewshot, Exemplar, FewShotSet};
pub use generate::{generate, SPLIT_FAILED_FLAG, TWO_CALL_FLAG};
pub use prompt::assemble_fewshot;
pub use score::{score_sequence, ScoreRequest};
