//! Evaluation metrics for the plan pipeline: answer normalization and
//! extraction, exact match and token-multiset F1, accuracy and
//! hop-stratified reports, the two-stage NLL decomposition, and
//! relative-gain arithmetic for comparing runs.

mod error;
mod extract;
mod f1;
mod nll;
mod normalize;
mod report;

pub use error::MetricsError;
pub use extract::answer_extract;
pub use f1::{exact_match, f1, token_f1};
pub use nll::{decompose_records, decompose_records_token_weighted, nll_decompose};
pub use normalize::{collapse_ws, normalize_answer};
pub use report::{
    accuracy, compare_reports, hop_stratified, relative_gain, round1, GainReport, HopBucket,
    MetricReport, RelativeGain,
};
