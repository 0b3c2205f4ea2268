//! Normalizes raw completions into plan text.

use codeplan_core::first_fenced_block;

use crate::error::CuratorError;

/// Pulls the plan out of a raw completion: the first fenced code
/// block's interior when one exists, otherwise the whole completion
/// trimmed. Nothing left after extraction is an error.
pub fn extract_plan_from_completion(raw: &str) -> Result<String, CuratorError> {
    let plan = match first_fenced_block(raw) {
        Some(block) => block.inner.to_string(),
        None => raw.trim().to_string(),
    };
    if plan.trim().is_empty() {
        return Err(CuratorError::EmptyPlan);
    }
    Ok(plan)
}
