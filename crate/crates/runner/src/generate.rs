//! Single-item generation: one continuation carrying plan and response.

use codeplan_client::{
    with_retries, ChatTransport, Message, RetryPolicy, SamplingParams, ServerConfig,
};
use codeplan_core::{
    first_fenced_block, render_plan_block, split_continuation, BenchmarkItem, GenerationTrace,
    Mode, TokenCounts,
};
use codeplan_metrics::answer_extract;

use crate::error::RunnerError;
use crate::fewshot::FewShotSet;
use crate::prompt::assemble_fewshot;

/// Flag set on a plan-mode trace whose continuation had no closed
/// fence to split at; the whole text is kept as the plan.
pub const SPLIT_FAILED_FLAG: &str = "split_failed";
/// Flag marking traces produced by the two-call ablation.
pub const TWO_CALL_FLAG: &str = "two_call";

/// Runs one item. Plan modes ask for a single continuation and split
/// it at the close of the first fenced block, matching the training
/// format where the plan immediately precedes the response. The
/// `two_call` ablation requests the plan and the response separately.
pub async fn generate<T: ChatTransport>(
    item: &BenchmarkItem,
    shots: &FewShotSet,
    mode: Mode,
    transport: &T,
    server: &ServerConfig,
    sampling: &SamplingParams,
    two_call: bool,
) -> Result<GenerationTrace, RunnerError> {
    let prompt = assemble_fewshot(item, shots, mode)?;
    let policy = RetryPolicy::from(server);
    let started = std::time::Instant::now();

    let trace = if two_call && mode.uses_plan() {
        generate_two_call(item, &prompt, mode, transport, &policy, sampling).await?
    } else {
        let output = chat(transport, &policy, &prompt, sampling).await?;
        let mut flags = Vec::new();
        let (plan, response) = if mode.uses_plan() {
            match split_continuation(&output.text) {
                Some((plan, response)) => (Some(plan), response),
                None => {
                    flags.push(SPLIT_FAILED_FLAG.to_string());
                    (Some(output.text.clone()), String::new())
                }
            }
        } else {
            (None, output.text.trim().to_string())
        };
        GenerationTrace {
            item_id: item.id.clone(),
            mode,
            extracted_answer: answer_extract(&response, item.task),
            plan,
            response,
            token_counts: TokenCounts {
                prompt: output.prompt_tokens,
                completion: output.completion_tokens,
            },
            latency_ms: 0.0,
            flags,
        }
    };

    let mut trace = trace;
    trace.latency_ms = started.elapsed().as_secs_f64() * 1e3;
    trace.check()?;
    Ok(trace)
}

async fn generate_two_call<T: ChatTransport>(
    item: &BenchmarkItem,
    prompt: &str,
    mode: Mode,
    transport: &T,
    policy: &RetryPolicy,
    sampling: &SamplingParams,
) -> Result<GenerationTrace, RunnerError> {
    let first = chat(transport, policy, prompt, sampling).await?;
    let plan = match first_fenced_block(&first.text) {
        Some(block) => block.inner.to_string(),
        None => first.text.trim().to_string(),
    };
    let second_prompt = format!("{prompt}\n{}\n", render_plan_block(&plan));
    let second = chat(transport, policy, &second_prompt, sampling).await?;
    let response = second.text.trim().to_string();
    Ok(GenerationTrace {
        item_id: item.id.clone(),
        mode,
        extracted_answer: answer_extract(&response, item.task),
        plan: Some(plan),
        response,
        token_counts: TokenCounts {
            prompt: first.prompt_tokens + second.prompt_tokens,
            completion: first.completion_tokens + second.completion_tokens,
        },
        latency_ms: 0.0,
        flags: vec![TWO_CALL_FLAG.to_string()],
    })
}

async fn chat<T: ChatTransport>(
    transport: &T,
    policy: &RetryPolicy,
    prompt: &str,
    sampling: &SamplingParams,
) -> Result<codeplan_client::ChatOutput, RunnerError> {
    let messages = [Message::user(prompt)];
    let attempted = with_retries(policy, |_| transport.chat(&messages, sampling)).await;
    attempted.result.map_err(RunnerError::Transport)
}
