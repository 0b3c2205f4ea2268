//! Optional information-gain scoring of accepted triples.

use codeplan_client::ChatTransport;
use codeplan_core::{render_plan_block, TrainingTriple};

use crate::error::CuratorError;

/// Mean NLL drop on the response when the plan is in context:
/// meanNLL(response | prompt) − meanNLL(response | prompt, plan).
/// Positive means the plan helps. Disabled by default; callers decide
/// the acceptance threshold.
pub async fn info_gain<T: ChatTransport>(
    triple: &TrainingTriple,
    scorer: Option<&T>,
) -> Result<f64, CuratorError> {
    let scorer = scorer.ok_or(CuratorError::ScorerUnavailable)?;
    let without_plan = mean_nll(scorer, &triple.prompt, &triple.response).await?;
    let with_plan_context =
        format!("{}\n{}\n", triple.prompt, render_plan_block(&triple.plan));
    let with_plan = mean_nll(scorer, &with_plan_context, &triple.response).await?;
    Ok(without_plan - with_plan)
}

async fn mean_nll<T: ChatTransport>(
    scorer: &T,
    context: &str,
    target: &str,
) -> Result<f64, CuratorError> {
    let nlls = scorer.score(context, target).await?;
    if nlls.is_empty() {
        return Err(CuratorError::Stats("scorer returned zero target tokens".to_string()));
    }
    Ok(nlls.iter().sum::<f64>() / nlls.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use codeplan_client::MockTransport;
    use codeplan_core::{AnnotationMeta, PlanKind};
    use codeplan_lint::{validate_plan, ValidateOptions};

    fn triple() -> TrainingTriple {
        let plan = "def f():\n    return 1";
        TrainingTriple {
            id: "t".to_string(),
            prompt: "the prompt".to_string(),
            plan: plan.to_string(),
            response: "the response".to_string(),
            plan_kind: PlanKind::Code,
            validation: validate_plan(plan, &ValidateOptions::default()),
            annotation_meta: AnnotationMeta {
                model: "m".to_string(),
                temperature: 0.7,
                top_p: 0.9,
                max_tokens: 64,
                seed: None,
                timestamp: "2026-01-01T00:00:00Z".to_string(),
            },
        }
    }

    fn scorer(without: f64, with: f64) -> MockTransport {
        MockTransport::returning(|_| String::new()).with_score(move |context, _target| {
            if context.contains("```") {
                Ok(vec![with])
            } else {
                Ok(vec![without])
            }
        })
    }

    #[tokio::test]
    async fn plan_context_reduces_nll_by_the_difference() {
        let gain = info_gain(&triple(), Some(&scorer(0.689, 0.347))).await.unwrap();
        assert!((gain - 0.342).abs() < 1e-12, "{gain}");
    }

    #[tokio::test]
    async fn identical_scores_mean_zero_gain() {
        let gain = info_gain(&triple(), Some(&scorer(0.5, 0.5))).await.unwrap();
        assert_eq!(gain, 0.0);
    }

    #[tokio::test]
    async fn harmful_plans_have_negative_gain() {
        let gain = info_gain(&triple(), Some(&scorer(0.5, 0.9))).await.unwrap();
        assert!((gain + 0.4).abs() < 1e-12, "{gain}");
    }

    #[tokio::test]
    async fn missing_scorer_instructs_to_disable_the_flag() {
        let err = info_gain::<MockTransport>(&triple(), None).await.unwrap_err();
        assert!(err.to_string().contains("disable the --info-gain flag"), "{err}");
    }
}
