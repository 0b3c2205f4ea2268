//! Corpus-level counts and length statistics.

use std::collections::BTreeMap;

use codeplan_core::TrainingTriple;
use serde::{Deserialize, Serialize};

use crate::error::CuratorError;
use crate::filter::FilterOutput;

/// Counts and average whitespace word lengths for one curation run.
/// Averages are absent when there are no accepted records.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CurationStats {
    pub n_input: usize,
    /// Records that produced a completion (accepted or rejected).
    pub n_annotated: usize,
    pub n_accepted: usize,
    /// Rejected records by primary rule: each record counts once,
    /// under the first rule it failed.
    pub n_rejected_by_rule: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avg_prompt_words: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avg_plan_words: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avg_response_words: Option<f64>,
}

impl CurationStats {
    pub fn n_rejected(&self) -> usize {
        self.n_rejected_by_rule.values().sum()
    }

    /// Bucket arithmetic must reconcile.
    pub fn check(&self) -> Result<(), CuratorError> {
        let n_rejected = self.n_rejected();
        if self.n_accepted + n_rejected != self.n_annotated {
            return Err(CuratorError::Stats(format!(
                "accepted {} + rejected {} != annotated {}",
                self.n_accepted, n_rejected, self.n_annotated
            )));
        }
        if self.n_annotated > self.n_input {
            return Err(CuratorError::Stats(format!(
                "annotated {} exceeds input {}",
                self.n_annotated, self.n_input
            )));
        }
        Ok(())
    }
}

fn words(text: &str) -> usize {
    text.split_whitespace().count()
}

fn mean(counts: impl Iterator<Item = usize>) -> Option<f64> {
    let (sum, n) = counts.fold((0usize, 0usize), |(s, n), c| (s + c, n + 1));
    (n > 0).then(|| sum as f64 / n as f64)
}

/// Statistics of an accepted corpus on its own: every record counts as
/// input, annotated, and accepted.
pub fn corpus_stats(triples: &[TrainingTriple]) -> CurationStats {
    CurationStats {
        n_input: triples.len(),
        n_annotated: triples.len(),
        n_accepted: triples.len(),
        n_rejected_by_rule: BTreeMap::new(),
        avg_prompt_words: mean(triples.iter().map(|t| words(&t.prompt))),
        avg_plan_words: mean(triples.iter().map(|t| words(&t.plan))),
        avg_response_words: mean(triples.iter().map(|t| words(&t.response))),
    }
}

/// Statistics of a full curation run, rejected and failed buckets
/// included. Length averages cover accepted records only.
pub fn run_stats(n_input: usize, output: &FilterOutput) -> Result<CurationStats, CuratorError> {
    let mut by_rule = BTreeMap::new();
    for record in &output.rejected {
        let primary = record.reasons.first().cloned().unwrap_or_else(|| "unknown".to_string());
        *by_rule.entry(primary).or_insert(0) += 1;
    }
    let stats = CurationStats {
        n_input,
        n_annotated: output.accepted.len() + output.rejected.len(),
        n_accepted: output.accepted.len(),
        n_rejected_by_rule: by_rule,
        avg_prompt_words: mean(output.accepted.iter().map(|t| words(&t.prompt))),
        avg_plan_words: mean(output.accepted.iter().map(|t| words(&t.plan))),
        avg_response_words: mean(output.accepted.iter().map(|t| words(&t.response))),
    };
    stats.check()?;
    if stats.n_annotated + output.failed.len() != n_input {
        return Err(CuratorError::Stats(format!(
            "annotated {} + failed {} != input {}",
            stats.n_annotated,
            output.failed.len(),
            n_input
        )));
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use codeplan_core::{AnnotationMeta, PlanKind};
    use codeplan_lint::{validate_plan, ValidateOptions};

    fn triple(prompt: &str, plan: &str, response: &str) -> TrainingTriple {
        TrainingTriple {
            id: "t".to_string(),
            prompt: prompt.to_string(),
            plan: plan.to_string(),
            response: response.to_string(),
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

    #[test]
    fn single_triple_averages_are_its_word_counts() {
        let stats = corpus_stats(&[triple("one two three", "a = 1\nb = 2", "v w x y z")]);
        assert_eq!(stats.avg_prompt_words, Some(3.0));
        assert_eq!(stats.avg_plan_words, Some(6.0));
        assert_eq!(stats.avg_response_words, Some(5.0));
        stats.check().unwrap();
    }

    #[test]
    fn empty_corpus_has_zero_counts_and_absent_averages() {
        let stats = corpus_stats(&[]);
        assert_eq!(stats.n_input, 0);
        assert_eq!(stats.n_accepted, 0);
        assert_eq!(stats.avg_prompt_words, None);
        assert_eq!(stats.avg_plan_words, None);
        assert_eq!(stats.avg_response_words, None);
        let line = serde_json::to_string(&stats).unwrap();
        assert!(!line.contains("avg_plan_words"), "{line}");
    }

    #[test]
    fn plan_word_average_is_the_arithmetic_mean() {
        let ten = "w ".repeat(10);
        let twenty = "w ".repeat(20);
        let stats = corpus_stats(&[triple("p", &ten, "r"), triple("p", &twenty, "r")]);
        assert_eq!(stats.avg_plan_words, Some(15.0));
    }

    #[test]
    fn averages_lie_within_the_per_record_range() {
        let triples: Vec<TrainingTriple> =
            (1..=7).map(|n| triple(&"p ".repeat(n), &"x ".repeat(2 * n), &"r ".repeat(3 * n))).collect();
        let stats = corpus_stats(&triples);
        for (avg, lo, hi) in [
            (stats.avg_prompt_words.unwrap(), 1.0, 7.0),
            (stats.avg_plan_words.unwrap(), 2.0, 14.0),
            (stats.avg_response_words.unwrap(), 3.0, 21.0),
        ] {
            assert!(avg >= lo && avg <= hi, "{avg} outside [{lo}, {hi}]");
        }
    }

    #[test]
    fn check_rejects_bucket_mismatch() {
        let stats = CurationStats { n_input: 5, n_annotated: 3, n_accepted: 3, ..Default::default() };
        stats.check().unwrap();
        let bad = CurationStats { n_input: 2, n_annotated: 3, n_accepted: 3, ..Default::default() };
        assert!(bad.check().is_err());
    }
}
