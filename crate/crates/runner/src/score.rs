//! Teacher-forced sequence scoring.

use codeplan_client::ChatTransport;
use codeplan_core::StageScore;
use serde::{Deserialize, Serialize};

use crate::error::RunnerError;

/// A context and the target continuation to score under it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreRequest {
    pub context: String,
    pub target: String,
}

impl ScoreRequest {
    pub fn new(context: impl Into<String>, target: impl Into<String>) -> Self {
        ScoreRequest { context: context.into(), target: target.into() }
    }

    pub fn check(&self) -> Result<(), RunnerError> {
        if self.target.is_empty() {
            return Err(RunnerError::Invalid("score target is empty".to_string()));
        }
        Ok(())
    }
}

/// Sum and mean of per-token negative log probabilities over the
/// target tokens only. Capability errors from endpoints without
/// logprob support pass through naming the endpoint.
pub async fn score_sequence<T: ChatTransport>(
    transport: &T,
    request: &ScoreRequest,
) -> Result<StageScore, RunnerError> {
    request.check()?;
    let nlls = transport.score(&request.context, &request.target).await?;
    if nlls.is_empty() {
        return Err(RunnerError::Invalid("scorer returned zero target tokens".to_string()));
    }
    if let Some(bad) = nlls.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(RunnerError::Invalid(format!("scorer returned an invalid NLL {bad}")));
    }
    Ok(StageScore::new(nlls.iter().sum(), nlls.len() as u32))
}
