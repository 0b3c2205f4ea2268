//! Deterministic few-shot prompt assembly.

use codeplan_core::{render_plan_block, BenchmarkItem, Mode};

use crate::error::RunnerError;
use crate::fewshot::FewShotSet;

/// Renders the full few-shot prompt: exemplars in order, each as a
/// question and answered target (plan modes put a fenced plan block
/// between them), then the query with its answer left open. Item
/// context passages, when present, precede the query question.
pub fn assemble_fewshot(
    item: &BenchmarkItem,
    shots: &FewShotSet,
    mode: Mode,
) -> Result<String, RunnerError> {
    shots.check()?;
    shots.check_against_query(&item.input)?;

    let mut prompt = String::new();
    for (i, exemplar) in shots.exemplars.iter().enumerate() {
        match (mode.uses_plan(), &exemplar.plan) {
            (true, Some(plan)) => {
                prompt.push_str(&format!(
                    "Question: {}\nAnswer:\n{}\n{}\n\n",
                    exemplar.input,
                    render_plan_block(plan),
                    exemplar.target
                ));
            }
            (false, None) => {
                prompt.push_str(&format!(
                    "Question: {}\nAnswer: {}\n\n",
                    exemplar.input, exemplar.target
                ));
            }
            (true, None) => {
                return Err(RunnerError::Mismatch(format!(
                    "mode {mode} renders plans but exemplar {i} has none"
                )));
            }
            (false, Some(_)) => {
                return Err(RunnerError::Mismatch(format!(
                    "mode {mode} is plan-free but exemplar {i} carries a plan"
                )));
            }
        }
    }

    if let Some(passages) = &item.context {
        prompt.push_str("Context:\n");
        for passage in passages {
            prompt.push_str(passage);
            prompt.push('\n');
        }
        prompt.push('\n');
    }
    prompt.push_str(&format!("Question: {}\nAnswer:", item.input));
    Ok(prompt)
}
