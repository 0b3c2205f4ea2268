//! Multi-hop QA ingestion and loading.
//!
//! Upstream MuSiQue / HotpotQA releases are converted once into the
//! benchmark file schema; evaluation then reads that file like any other
//! benchmark, filtered by hop count.

use std::collections::HashSet;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use codeplan_core::{parse_benchmark_file, BenchmarkItem, Task};

use crate::error::BenchError;

/// Which hop counts to keep when loading a multi-hop benchmark file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HopFilter {
    All,
    Only(u8),
}

impl FromStr for HopFilter {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(HopFilter::All),
            "2" => Ok(HopFilter::Only(2)),
            "3" => Ok(HopFilter::Only(3)),
            "4" => Ok(HopFilter::Only(4)),
            other => Err(BenchError::Spec(format!(
                "hop filter must be 2, 3, 4, or all, got '{other}'"
            ))),
        }
    }
}

/// Loads a benchmark file of QA items, requiring reference passages on
/// every item and keeping only the selected hop counts.
pub fn load_multihop(path: &Path, filter: HopFilter) -> Result<Vec<BenchmarkItem>, BenchError> {
    let items = parse_benchmark_file(path)?;
    let mut kept = Vec::new();
    for item in items {
        if item.context.as_ref().is_none_or(Vec::is_empty) {
            return Err(BenchError::Spec(format!(
                "item '{}' has no context passages",
                item.id
            )));
        }
        match filter {
            HopFilter::All => kept.push(item),
            HopFilter::Only(h) => {
                let Some(hops) = item.hops else {
                    return Err(BenchError::Spec(format!(
                        "item '{}' has no hops field but the hop filter is {h}",
                        item.id
                    )));
                };
                if hops == h {
                    kept.push(item);
                }
            }
        }
    }
    Ok(kept)
}

/// Source format for `ingest_qa`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QaFormat {
    Musique,
    Hotpotqa,
}

impl FromStr for QaFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "musique" => Ok(QaFormat::Musique),
            "hotpotqa" => Ok(QaFormat::Hotpotqa),
            other => Err(BenchError::Spec(format!(
                "format must be musique or hotpotqa, got '{other}'"
            ))),
        }
    }
}

/// Converts a raw upstream dataset dump into benchmark items carrying the
/// question, every accepted answer, the hop count, and the gold reference
/// passages as context. `path` only labels error messages.
pub fn ingest_qa(raw: &str, format: QaFormat, path: &str) -> Result<Vec<BenchmarkItem>, BenchError> {
    let items = match format {
        QaFormat::Musique => ingest_musique(raw, path)?,
        QaFormat::Hotpotqa => ingest_hotpotqa(raw, path)?,
    };
    let mut seen = HashSet::new();
    for item in &items {
        if !seen.insert(item.id.clone()) {
            return Err(BenchError::Spec(format!("duplicate id '{}' in {path}", item.id)));
        }
        item.check()?;
    }
    Ok(items)
}

#[derive(Deserialize)]
struct MusiqueParagraph {
    title: String,
    paragraph_text: String,
    #[serde(default)]
    is_supporting: bool,
}

#[derive(Deserialize)]
struct MusiqueRecord {
    id: String,
    question: String,
    answer: String,
    #[serde(default)]
    answer_aliases: Vec<String>,
    #[serde(default)]
    question_decomposition: Vec<serde_json::Value>,
    paragraphs: Vec<MusiqueParagraph>,
}

// MuSiQue ids look like "2hop__482757_12019"; the prefix is the hop
// count, with the decomposition length as fallback.
fn musique_hops(record: &MusiqueRecord) -> Option<u8> {
    if let Some(prefix) = record.id.split("hop").next() {
        if let Ok(h) = prefix.parse::<u8>() {
            return Some(h);
        }
    }
    u8::try_from(record.question_decomposition.len()).ok().filter(|&h| h > 0)
}

fn ingest_musique(raw: &str, path: &str) -> Result<Vec<BenchmarkItem>, BenchError> {
    let fail = |line: usize, message: String| BenchError::Ingest {
        path: path.to_string(),
        line,
        message,
    };
    let mut items = Vec::new();
    for (i, text) in raw.lines().enumerate() {
        let line = i + 1;
        if text.trim().is_empty() {
            continue;
        }
        let record: MusiqueRecord = serde_json::from_str(text)
            .map_err(|e| fail(line, format!("not a MuSiQue record: {e}")))?;
        let hops =
            musique_hops(&record).ok_or_else(|| fail(line, "cannot determine hop count".into()))?;
        if !(2..=4).contains(&hops) {
            return Err(fail(line, format!("hop count {hops} outside 2..=4")));
        }
        let mut gold = vec![record.answer.trim().to_string()];
        for alias in &record.answer_aliases {
            let alias = alias.trim();
            if !alias.is_empty() && !gold.iter().any(|g| g == alias) {
                gold.push(alias.to_string());
            }
        }
        let context: Vec<String> = record
            .paragraphs
            .iter()
            .filter(|p| p.is_supporting)
            .map(|p| format!("{}: {}", p.title, p.paragraph_text))
            .collect();
        if context.is_empty() {
            return Err(fail(line, format!("'{}' has no supporting paragraphs", record.id)));
        }
        items.push(BenchmarkItem {
            id: record.id,
            task: Task::MultiHopQa,
            input: record.question,
            gold,
            hops: Some(hops),
            seed: 0,
            context: Some(context),
        });
    }
    if items.is_empty() {
        return Err(fail(0, "no records found".into()));
    }
    Ok(items)
}

#[derive(Deserialize)]
struct HotpotRecord {
    #[serde(rename = "_id")]
    id: String,
    question: String,
    answer: String,
    supporting_facts: Vec<(String, usize)>,
    context: Vec<(String, Vec<String>)>,
}

fn ingest_hotpotqa(raw: &str, path: &str) -> Result<Vec<BenchmarkItem>, BenchError> {
    let fail = |message: String| BenchError::Ingest { path: path.to_string(), line: 0, message };
    let records: Vec<HotpotRecord> =
        serde_json::from_str(raw).map_err(|e| fail(format!("not a HotpotQA array: {e}")))?;
    if records.is_empty() {
        return Err(fail("no records found".into()));
    }
    let mut items = Vec::new();
    for record in records {
        let mut titles: Vec<&str> = Vec::new();
        for (title, _) in &record.supporting_facts {
            if !titles.contains(&title.as_str()) {
                titles.push(title);
            }
        }
        if titles.is_empty() {
            return Err(fail(format!("'{}' has no supporting facts", record.id)));
        }
        let mut context = Vec::new();
        for title in titles {
            let Some((_, sentences)) = record.context.iter().find(|(t, _)| t == title) else {
                return Err(fail(format!(
                    "'{}' cites '{title}' which is not among its passages",
                    record.id
                )));
            };
            context.push(format!("{title}: {}", sentences.join("")));
        }
        items.push(BenchmarkItem {
            id: record.id,
            task: Task::MultiHopQa,
            input: record.question,
            gold: vec![record.answer.trim().to_string()],
            // HotpotQA questions are two-hop by construction.
            hops: Some(2),
            seed: 0,
            context: Some(context),
        });
    }
    Ok(items)
}
