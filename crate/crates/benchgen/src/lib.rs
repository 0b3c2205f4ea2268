//! Deterministic benchmark synthesis for four symbolic reasoning tasks
//! (Boolean expressions, coin-flip tracking, last-letter concatenation,
//! and bracket-sequence completion), plus ingestion of multi-hop QA
//! datasets into the shared benchmark file schema.
//!
//! Gold answers come from the exact solvers in [`oracle`]; generation is
//! reproducible per item from (seed, index).

mod error;
mod gen;
pub mod oracle;
mod qa;

pub use error::BenchError;
pub use gen::{all_families, builtin_names, gen_item, generate, BracketFamily, GenSpec, TaskSpec};
pub use oracle::{coin_heads_up, dyck_balanced, dyck_completion, eval_boolean, last_letters};
pub use qa::{ingest_qa, load_multihop, HopFilter, QaFormat};
