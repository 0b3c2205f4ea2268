//! End-to-end curation: annotate, optionally resample, filter, count.

use codeplan_client::{ChatTransport, SamplingParams, ServerConfig};
use codeplan_core::{PlanKind, PromptResponsePair};
use codeplan_lint::ValidateOptions;

use crate::annotate::{annotate_batch, AnnotationOutcome, AnnotationResult};
use crate::error::CuratorError;
use crate::filter::{evaluate_completion, filter_records, Evaluated, FilterOutput};
use crate::stats::{run_stats, CurationStats};

#[derive(Debug, Clone, PartialEq)]
pub struct CurationOptions {
    /// Re-request a completion when the plan fails validation. Off by
    /// default: one sample per pair keeps the data distribution flat.
    pub resample_on_invalid: bool,
    /// Extra completions allowed per record when resampling.
    pub max_resamples: u32,
    pub validate: ValidateOptions,
}

impl Default for CurationOptions {
    fn default() -> Self {
        Self { resample_on_invalid: false, max_resamples: 2, validate: ValidateOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CuratedBatch {
    pub output: FilterOutput,
    pub stats: CurationStats,
}

/// Runs the curation pipeline over a batch of pairs. Every input ends
/// in exactly one bucket: accepted, rejected, or failed.
pub async fn curate_pairs<T: ChatTransport>(
    pairs: &[PromptResponsePair],
    transport: &T,
    server: &ServerConfig,
    sampling: &SamplingParams,
    kind: PlanKind,
    options: &CurationOptions,
) -> Result<CuratedBatch, CuratorError> {
    let mut results = annotate_batch(pairs, transport, server, sampling, kind).await?;

    if options.resample_on_invalid {
        for _ in 0..options.max_resamples {
            let invalid: Vec<usize> = results
                .iter()
                .enumerate()
                .filter(|(_, r)| is_invalid_completion(r, &options.validate))
                .map(|(i, _)| i)
                .collect();
            if invalid.is_empty() {
                break;
            }
            let subset: Vec<PromptResponsePair> =
                invalid.iter().map(|&i| results[i].pair.clone()).collect();
            let redone = annotate_batch(&subset, transport, server, sampling, kind).await?;
            for (&i, new_result) in invalid.iter().zip(redone) {
                // A failed resample never downgrades an existing completion.
                if matches!(new_result.outcome, AnnotationOutcome::Completed { .. }) {
                    results[i] = new_result;
                }
            }
        }
    }

    let output = filter_records(&results, kind, &options.validate);
    let stats = run_stats(pairs.len(), &output)?;
    Ok(CuratedBatch { output, stats })
}

fn is_invalid_completion(result: &AnnotationResult, options: &ValidateOptions) -> bool {
    match &result.outcome {
        AnnotationOutcome::Completed { raw, .. } => {
            matches!(evaluate_completion(raw, options), Evaluated::Invalid { .. })
        }
        AnnotationOutcome::Failed(_) => false,
    }
}
