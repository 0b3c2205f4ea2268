//! Structural filtering of annotated plans into training triples.

use codeplan_core::{PlanKind, TrainingTriple};
use codeplan_lint::{validate_plan, ValidateOptions, ValidationReport, Verdict};
use serde::{Deserialize, Serialize};

use crate::annotate::{AnnotationOutcome, AnnotationResult};
use crate::extract::extract_plan_from_completion;

/// Rejection-map key for completions that yielded no plan text at all.
pub const EMPTY_PLAN_RULE: &str = "empty_plan";

/// One annotated pair whose plan failed validation, with the rule ids
/// that rejected it. The extracted plan is kept for auditing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectedRecord {
    pub id: String,
    pub prompt: String,
    pub response: String,
    pub plan: String,
    /// Rule ids (R1..R6) or [`EMPTY_PLAN_RULE`], first rule is primary.
    pub reasons: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<ValidationReport>,
}

/// One pair that never produced a completion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<u16>,
    pub message: String,
    pub attempts: u32,
}

/// Every input record lands in exactly one of these buckets.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FilterOutput {
    pub accepted: Vec<TrainingTriple>,
    pub rejected: Vec<RejectedRecord>,
    pub failed: Vec<FailureRecord>,
}

/// Extracts and validates each completed annotation, packaging valid
/// plans as training triples and recording rule ids for the rest.
/// Transport failures pass through untouched. Pure and deterministic.
pub fn filter_records(
    results: &[AnnotationResult],
    kind: PlanKind,
    options: &ValidateOptions,
) -> FilterOutput {
    let mut out = FilterOutput::default();
    for result in results {
        match &result.outcome {
            AnnotationOutcome::Failed(failure) => out.failed.push(FailureRecord {
                id: result.pair.id.clone(),
                status: failure.status,
                message: failure.message.clone(),
                attempts: failure.attempts,
            }),
            AnnotationOutcome::Completed { raw, meta, .. } => {
                match evaluate_completion(raw, options) {
                    Evaluated::Valid { plan, report } => out.accepted.push(TrainingTriple {
                        id: result.pair.id.clone(),
                        prompt: result.pair.prompt.clone(),
                        plan,
                        response: result.pair.response.clone(),
                        plan_kind: kind,
                        validation: report,
                        annotation_meta: meta.clone(),
                    }),
                    Evaluated::Invalid { plan, reasons, report } => {
                        out.rejected.push(RejectedRecord {
                            id: result.pair.id.clone(),
                            prompt: result.pair.prompt.clone(),
                            response: result.pair.response.clone(),
                            plan,
                            reasons,
                            report,
                        })
                    }
                }
            }
        }
    }
    out
}

pub(crate) enum Evaluated {
    Valid { plan: String, report: ValidationReport },
    Invalid { plan: String, reasons: Vec<String>, report: Option<ValidationReport> },
}

pub(crate) fn evaluate_completion(raw: &str, options: &ValidateOptions) -> Evaluated {
    let plan = match extract_plan_from_completion(raw) {
        Ok(plan) => plan,
        Err(_) => {
            return Evaluated::Invalid {
                plan: String::new(),
                reasons: vec![EMPTY_PLAN_RULE.to_string()],
                report: None,
            };
        }
    };
    let report = validate_plan(&plan, options);
    if report.verdict == Verdict::Accepted {
        Evaluated::Valid { plan, report }
    } else {
        let reasons = report.failed_rules().iter().map(|r| r.to_string()).collect();
        Evaluated::Invalid { plan, reasons, report: Some(report) }
    }
}
