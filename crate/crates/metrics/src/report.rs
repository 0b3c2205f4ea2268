//! Aggregating traces against benchmark items into metric reports.

use std::collections::{BTreeMap, HashMap};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use codeplan_core::{BenchmarkItem, Task, TraceRecord};

use crate::error::MetricsError;
use crate::extract::answer_extract;
use crate::f1::{exact_match, f1};
use crate::normalize::collapse_ws;

/// Aggregate metrics for one trace file. Symbolic and math tasks fill
/// `accuracy`; QA tasks fill `em`/`f1` and, when stratified, `per_hop`.
/// `failures` counts items with no extractable answer plus failed
/// generations; both score as wrong.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub task: Task,
    pub n_items: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accuracy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub em: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_hop: Option<BTreeMap<u8, HopBucket>>,
    pub failures: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopBucket {
    pub em: f64,
    pub f1: f64,
    pub n: usize,
}

/// One judged item.
struct Judgment {
    correct: bool,
    em: f64,
    f1: f64,
    failed: bool,
    hops: Option<u8>,
}

fn judge(trace: &TraceRecord, item: &BenchmarkItem) -> Judgment {
    let mut judgment =
        Judgment { correct: false, em: 0.0, f1: 0.0, failed: false, hops: item.hops };
    let TraceRecord::Trace(trace) = trace else {
        judgment.failed = true;
        return judgment;
    };
    let extracted = trace
        .extracted_answer
        .clone()
        .or_else(|| answer_extract(&trace.response, item.task));
    let Some(pred) = extracted else {
        judgment.failed = true;
        return judgment;
    };
    if item.task == Task::Dyck {
        // Bracket answers survive whitespace collapsing but not the
        // punctuation-stripping normalizer, so they compare verbatim.
        let hit = item.gold.iter().any(|g| collapse_ws(g) == collapse_ws(&pred));
        judgment.correct = hit;
        judgment.em = f64::from(hit);
        judgment.f1 = judgment.em;
    } else {
        judgment.em = f64::from(exact_match(&pred, &item.gold));
        judgment.f1 = f1(&pred, &item.gold);
        judgment.correct = judgment.em == 1.0;
    }
    judgment
}

fn join_and_judge(
    traces: &[TraceRecord],
    items: &[BenchmarkItem],
) -> Result<(Task, Vec<Judgment>), MetricsError> {
    if traces.is_empty() {
        return Err(MetricsError::Invalid("no traces to evaluate".into()));
    }
    let by_id: HashMap<&str, &BenchmarkItem> =
        items.iter().map(|i| (i.id.as_str(), i)).collect();
    let orphans: Vec<String> = traces
        .iter()
        .filter(|t| !by_id.contains_key(t.item_id()))
        .map(|t| t.item_id().to_string())
        .collect();
    if !orphans.is_empty() {
        return Err(MetricsError::OrphanTraces { ids: orphans });
    }
    let task = by_id[traces[0].item_id()].task;
    let judgments =
        traces.iter().map(|t| judge(t, by_id[t.item_id()])).collect();
    Ok((task, judgments))
}

/// Fraction of traces whose extracted answer exactly matches gold.
/// Inputs join by item id; a trace with no matching item is an error.
pub fn accuracy(
    traces: &[TraceRecord],
    items: &[BenchmarkItem],
) -> Result<MetricReport, MetricsError> {
    let (task, judgments) = join_and_judge(traces, items)?;
    let n = judgments.len();
    let correct = judgments.iter().filter(|j| j.correct).count();
    let failures = judgments.iter().filter(|j| j.failed).count();
    Ok(MetricReport {
        task,
        n_items: n,
        accuracy: Some(correct as f64 / n as f64),
        em: None,
        f1: None,
        per_hop: None,
        failures,
        notes: Vec::new(),
    })
}

/// EM/F1 with a per-hop breakdown. Every evaluated item must carry a
/// hops label; hop counts in 2..=4 with no items are noted as n=0.
pub fn hop_stratified(
    traces: &[TraceRecord],
    items: &[BenchmarkItem],
) -> Result<MetricReport, MetricsError> {
    let (task, judgments) = join_and_judge(traces, items)?;
    for (trace, judgment) in traces.iter().zip(&judgments) {
        if judgment.hops.is_none() {
            return Err(MetricsError::MissingHops { id: trace.item_id().to_string() });
        }
    }
    let n = judgments.len();
    let em = judgments.iter().map(|j| j.em).sum::<f64>() / n as f64;
    let f1 = judgments.iter().map(|j| j.f1).sum::<f64>() / n as f64;
    let failures = judgments.iter().filter(|j| j.failed).count();
    let mut per_hop: BTreeMap<u8, HopBucket> = BTreeMap::new();
    let mut sums: BTreeMap<u8, (f64, f64, usize)> = BTreeMap::new();
    for judgment in &judgments {
        let entry = sums.entry(judgment.hops.expect("checked above")).or_insert((0.0, 0.0, 0));
        entry.0 += judgment.em;
        entry.1 += judgment.f1;
        entry.2 += 1;
    }
    for (hop, (em_sum, f1_sum, count)) in sums {
        per_hop.insert(
            hop,
            HopBucket { em: em_sum / count as f64, f1: f1_sum / count as f64, n: count },
        );
    }
    let notes = (2..=4u8)
        .filter(|h| !per_hop.contains_key(h))
        .map(|h| format!("{h}-hop bucket is empty (n=0)"))
        .collect();
    Ok(MetricReport {
        task,
        n_items: n,
        accuracy: None,
        em: Some(em),
        f1: Some(f1),
        per_hop: Some(per_hop),
        failures,
        notes,
    })
}

/// Percent change of a treatment score over a baseline, rounded to one
/// decimal (half away from zero). A zero baseline has no defined gain
/// and reports as N/A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelativeGain {
    Percent(f64),
    NotApplicable,
}

pub fn relative_gain(baseline: f64, treatment: f64) -> RelativeGain {
    if baseline <= 0.0 {
        return RelativeGain::NotApplicable;
    }
    let percent = 100.0 * (treatment - baseline) / baseline;
    RelativeGain::Percent(round1(percent))
}

/// Rounds to one decimal, half away from zero.
pub fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

impl std::fmt::Display for RelativeGain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RelativeGain::Percent(p) => write!(f, "{p:+.1}%"),
            RelativeGain::NotApplicable => write!(f, "N/A"),
        }
    }
}

impl Serialize for RelativeGain {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            RelativeGain::Percent(p) => serializer.serialize_f64(*p),
            RelativeGain::NotApplicable => serializer.serialize_str("N/A"),
        }
    }
}

impl<'de> Deserialize<'de> for RelativeGain {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Number(f64),
            Text(String),
        }
        match Wire::deserialize(deserializer)? {
            Wire::Number(p) => Ok(RelativeGain::Percent(p)),
            Wire::Text(s) if s == "N/A" => Ok(RelativeGain::NotApplicable),
            Wire::Text(s) => Err(D::Error::custom(format!("expected a percent or \"N/A\", got '{s}'"))),
        }
    }
}

/// Relative gains of a treatment report over a baseline report, metric
/// by metric, including per-hop EM gains when both reports have the
/// same hop buckets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accuracy: Option<RelativeGain>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub em: Option<RelativeGain>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f1: Option<RelativeGain>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_hop_em: Option<BTreeMap<u8, RelativeGain>>,
}

pub fn compare_reports(baseline: &MetricReport, treatment: &MetricReport) -> GainReport {
    let gain = |b: Option<f64>, t: Option<f64>| match (b, t) {
        (Some(b), Some(t)) => Some(relative_gain(b, t)),
        _ => None,
    };
    let per_hop_em = match (&baseline.per_hop, &treatment.per_hop) {
        (Some(b), Some(t)) => {
            let gains: BTreeMap<u8, RelativeGain> = b
                .iter()
                .filter_map(|(hop, bucket)| {
                    t.get(hop).map(|tb| (*hop, relative_gain(bucket.em, tb.em)))
                })
                .collect();
            if gains.is_empty() { None } else { Some(gains) }
        }
        _ => None,
    };
    GainReport {
        accuracy: gain(baseline.accuracy, treatment.accuracy),
        em: gain(baseline.em, treatment.em),
        f1: gain(baseline.f1, treatment.f1),
        per_hop_em,
    }
}
