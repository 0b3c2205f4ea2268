//! Concurrent batch annotation with bounded in-flight requests.

use codeplan_client::{
    with_retries, ChatTransport, Message, RetryPolicy, SamplingParams, ServerConfig,
};
use codeplan_core::{AnnotationMeta, PlanKind, PromptResponsePair};
use futures::stream::{self, StreamExt};
use serde::{Deserialize, Serialize};

use crate::error::CuratorError;
use crate::prompt::build_annotation_prompt;

/// A permanent per-record failure: retries exhausted or the request
/// was malformed. `status` is the last HTTP status seen, when any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationFailure {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<u16>,
    pub message: String,
    pub attempts: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnnotationOutcome {
    Completed {
        /// Raw completion text, before plan extraction.
        raw: String,
        /// Total requests made for this record, first try included.
        attempts: u32,
        meta: AnnotationMeta,
    },
    Failed(AnnotationFailure),
}

/// One input pair with what annotation produced for it.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationResult {
    pub pair: PromptResponsePair,
    pub outcome: AnnotationOutcome,
}

/// Annotates every pair, returning one result per pair in input order
/// no matter how completions interleave. Transient failures are
/// retried per the server config; exhausted retries become per-record
/// failures. Fatal errors (auth, missing key, bad config) abort the
/// whole batch.
pub async fn annotate_batch<T: ChatTransport>(
    pairs: &[PromptResponsePair],
    transport: &T,
    server: &ServerConfig,
    sampling: &SamplingParams,
    kind: PlanKind,
) -> Result<Vec<AnnotationResult>, CuratorError> {
    server.validate().map_err(CuratorError::Transport)?;
    sampling.validate().map_err(CuratorError::Transport)?;
    let policy = RetryPolicy::from(server);

    let jobs = pairs.iter().enumerate().map(|(index, pair)| {
        let policy = policy.clone();
        async move {
            let outcome = annotate_one(pair, transport, &policy, server, sampling, kind).await;
            (index, outcome)
        }
    });

    let mut slots: Vec<Option<AnnotationOutcome>> = vec![None; pairs.len()];
    let mut completions = stream::iter(jobs).buffer_unordered(server.max_concurrent.max(1));
    while let Some((index, outcome)) = completions.next().await {
        slots[index] = Some(outcome?);
    }
    drop(completions);

    Ok(pairs
        .iter()
        .zip(slots)
        .map(|(pair, slot)| AnnotationResult {
            pair: pair.clone(),
            outcome: slot.expect("every index visited"),
        })
        .collect())
}

/// Annotates one pair. `Err` is reserved for batch-fatal conditions;
/// everything else folds into the outcome.
async fn annotate_one<T: ChatTransport>(
    pair: &PromptResponsePair,
    transport: &T,
    policy: &RetryPolicy,
    server: &ServerConfig,
    sampling: &SamplingParams,
    kind: PlanKind,
) -> Result<AnnotationOutcome, CuratorError> {
    let prompt = match build_annotation_prompt(pair, kind) {
        Ok(prompt) => prompt,
        Err(err) => {
            return Ok(AnnotationOutcome::Failed(AnnotationFailure {
                status: None,
                message: err.to_string(),
                attempts: 0,
            }));
        }
    };
    request_completion(&prompt, transport, policy, server, sampling).await
}

/// One completion request with the retry envelope applied. Shared by
/// first-pass annotation and validation-failure resampling.
pub(crate) async fn request_completion<T: ChatTransport>(
    prompt: &str,
    transport: &T,
    policy: &RetryPolicy,
    server: &ServerConfig,
    sampling: &SamplingParams,
) -> Result<AnnotationOutcome, CuratorError> {
    let messages = [Message::user(prompt)];
    let attempted = with_retries(policy, |_| transport.chat(&messages, sampling)).await;
    match attempted.result {
        Ok(output) => Ok(AnnotationOutcome::Completed {
            raw: output.text,
            attempts: attempted.attempts,
            meta: AnnotationMeta {
                model: server.model.clone(),
                temperature: sampling.temperature,
                top_p: sampling.top_p,
                max_tokens: sampling.max_tokens,
                seed: sampling.seed,
                timestamp: chrono::Utc::now().to_rfc3339(),
            },
        }),
        Err(err) if err.is_fatal() => Err(err.into()),
        Err(err) => {
            tracing::warn!(error = %err, attempts = attempted.attempts, "annotation failed");
            Ok(AnnotationOutcome::Failed(AnnotationFailure {
                status: err.status_code(),
                message: err.to_string(),
                attempts: attempted.attempts,
            }))
        }
    }
}
