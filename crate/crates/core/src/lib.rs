//! Shared domain types and file formats for the plan pipeline.
//!
//! Everything that crosses a crate or process boundary lives here: the
//! prompt-response pairs going into curation, the training triples and
//! benchmark items coming out, generation traces, NLL score records,
//! and the triple-backtick fence convention that delimits plans inside
//! rendered prompts and raw completions.
//!
//! All file formats are JSON Lines. Parsers attach 1-based line numbers
//! to every diagnostic and never reorder records.

pub mod error;
pub mod fence;
pub mod jsonl;
pub mod types;

pub use error::CoreError;
pub use fence::{first_fenced_block, render_plan_block, split_continuation, FencedBlock};
pub use jsonl::{
    parse_benchmark_file, parse_benchmark_reader, parse_pairs_file, parse_pairs_reader,
    parse_score_records_file, parse_score_records_reader, parse_traces_file, parse_traces_reader,
    parse_triples_file, parse_triples_reader, parse_vanilla_file, serialize_triples,
    serialize_triples_file, write_jsonl, write_jsonl_file, write_line,
};
pub use types::{
    AnnotationMeta, BenchmarkItem, GenerationTrace, Mode, NllReport, PlanKind,
    PromptResponsePair, ScoreRecord, StageScore, Task, TokenCounts, TraceFailure, TraceRecord,
    TrainingTriple, VanillaRecord,
};
