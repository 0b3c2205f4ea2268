//! Training-data curation: turn raw prompt-response pairs into
//! validated (prompt, plan, response) triples.
//!
//! The pipeline renders an annotation prompt per pair, requests one
//! completion from a chat-completions server under bounded concurrency,
//! extracts the plan from the completion, validates it structurally,
//! and emits accepted triples plus audit records for everything else.
//! Output order always equals input order, and every input lands in
//! exactly one of the accepted, rejected, or failed buckets.

pub mod annotate;
pub mod emit;
pub mod error;
pub mod extract;
pub mod filter;
pub mod gain;
pub mod pipeline;
pub mod prompt;
pub mod stats;

pub use codeplan_client::{SamplingParams, ServerConfig};

pub use annotate::{annotate_batch, AnnotationFailure, AnnotationOutcome, AnnotationResult};
pub use emit::{emit_training_file, emit_training_records, existing_ids, TrainingFormat};
pub use error::CuratorError;
pub use extract::extract_plan_from_completion;
pub use filter::{filter_records, FailureRecord, FilterOutput, RejectedRecord, EMPTY_PLAN_RULE};
pub use gain::info_gain;
pub use pipeline::{curate_pairs, CuratedBatch, CurationOptions};
pub use prompt::{build_annotation_prompt, template_for, CODE_TEMPLATE, EXEC_TEMPLATE, NL_TEMPLATE};
pub use stats::{corpus_stats, run_stats, CurationStats};
