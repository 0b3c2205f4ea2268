//! Assembling the two-stage NLL decomposition.

use std::collections::BTreeSet;

use codeplan_core::{NllReport, ScoreRecord, StageScore};

use crate::error::MetricsError;

/// Combines per-record stage scores into a decomposition report.
///
/// Each stage value is the mean over records of that record's mean
/// per-token NLL; the overall value is the sum of the two stages. An
/// empty stage 1 (plan-free scoring) contributes 0 by convention. When
/// both stages are present their id sets must match exactly.
pub fn nll_decompose(
    stage1: &[(String, StageScore)],
    stage2: &[(String, StageScore)],
) -> Result<NllReport, MetricsError> {
    if stage2.is_empty() {
        return Err(MetricsError::Invalid("no stage 2 scores to aggregate".into()));
    }
    if !stage1.is_empty() {
        check_alignment(stage1, stage2)?;
    }
    let stage1_mean = mean_of_means(stage1);
    let stage2_mean = mean_of_means(stage2);
    let report = NllReport::new(stage1_mean, stage2_mean)?;
    report.check()?;
    Ok(report)
}

/// Splits score records into stage lists and decomposes them. Records
/// must be uniformly with or without stage 1.
pub fn decompose_records(records: &[ScoreRecord]) -> Result<NllReport, MetricsError> {
    let stage1: Vec<(String, StageScore)> = records
        .iter()
        .filter_map(|r| r.stage1.clone().map(|s| (r.id.clone(), s)))
        .collect();
    if !stage1.is_empty() && stage1.len() != records.len() {
        let missing: Vec<&str> = records
            .iter()
            .filter(|r| r.stage1.is_none())
            .map(|r| r.id.as_str())
            .take(5)
            .collect();
        return Err(MetricsError::Misaligned(format!(
            "records {} lack stage 1 while others have it",
            missing.join(", ")
        )));
    }
    let stage2: Vec<(String, StageScore)> =
        records.iter().map(|r| (r.id.clone(), r.stage2.clone())).collect();
    nll_decompose(&stage1, &stage2)
}

/// Token-weighted variant: each stage value is the summed NLL over all
/// records divided by the total token count, so long records weigh
/// more. Reported alongside the record-mean version because the two
/// aggregations genuinely differ on mixed-length corpora.
pub fn decompose_records_token_weighted(
    records: &[ScoreRecord],
) -> Result<NllReport, MetricsError> {
    if records.is_empty() {
        return Err(MetricsError::Invalid("no score records to aggregate".into()));
    }
    let stage1: Vec<&StageScore> = records.iter().filter_map(|r| r.stage1.as_ref()).collect();
    if !stage1.is_empty() && stage1.len() != records.len() {
        return Err(MetricsError::Misaligned(
            "records mix present and absent stage 1 scores".into(),
        ));
    }
    let stage1_mean = token_mean(stage1.into_iter());
    let stage2_mean = token_mean(records.iter().map(|r| &r.stage2));
    let report = NllReport::new(stage1_mean, stage2_mean)?;
    report.check()?;
    Ok(report)
}

fn token_mean<'a>(scores: impl Iterator<Item = &'a StageScore>) -> f64 {
    let (sum, tokens) =
        scores.fold((0.0, 0u64), |(s, n), score| (s + score.sum_nll, n + score.n_tokens as u64));
    if tokens == 0 {
        return 0.0;
    }
    sum / tokens as f64
}

fn mean_of_means(scores: &[(String, StageScore)]) -> f64 {
    if scores.is_empty() {
        return 0.0;
    }
    scores.iter().map(|(_, s)| s.mean_nll).sum::<f64>() / scores.len() as f64
}

fn check_alignment(
    stage1: &[(String, StageScore)],
    stage2: &[(String, StageScore)],
) -> Result<(), MetricsError> {
    let ids1: BTreeSet<&str> = stage1.iter().map(|(id, _)| id.as_str()).collect();
    let ids2: BTreeSet<&str> = stage2.iter().map(|(id, _)| id.as_str()).collect();
    if ids1.len() != stage1.len() || ids2.len() != stage2.len() {
        return Err(MetricsError::Misaligned("duplicate record ids within a stage".into()));
    }
    if ids1 != ids2 {
        let only1: Vec<&str> = ids1.difference(&ids2).copied().take(5).collect();
        let only2: Vec<&str> = ids2.difference(&ids1).copied().take(5).collect();
        let mut parts = Vec::new();
        if !only1.is_empty() {
            parts.push(format!("only in stage 1: {}", only1.join(", ")));
        }
        if !only2.is_empty() {
            parts.push(format!("only in stage 2: {}", only2.join(", ")));
        }
        return Err(MetricsError::Misaligned(parts.join("; ")));
    }
    Ok(())
}
