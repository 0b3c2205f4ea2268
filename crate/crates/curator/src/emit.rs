//! Training-file emission and resume bookkeeping.

use std::collections::BTreeSet;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use codeplan_core::{serialize_triples, write_jsonl, TrainingTriple, VanillaRecord};

use crate::error::CuratorError;

/// On-disk layout of an emitted training file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrainingFormat {
    /// Prompt, plan, and response as separate fields; the trainer
    /// decides segment masking.
    Triple,
    /// Prompt and response only, for the no-plan baseline.
    Vanilla,
}

impl std::str::FromStr for TrainingFormat {
    type Err = CuratorError;
    fn from_str(s: &str) -> Result<Self, CuratorError> {
        match s {
            "triple" => Ok(TrainingFormat::Triple),
            "vanilla" => Ok(TrainingFormat::Vanilla),
            other => Err(CuratorError::Stats(format!("unknown training format '{other}'"))),
        }
    }
}

pub fn emit_training_records<W: Write>(
    writer: W,
    triples: &[TrainingTriple],
    format: TrainingFormat,
) -> Result<(), CuratorError> {
    match format {
        TrainingFormat::Triple => serialize_triples(writer, triples)?,
        TrainingFormat::Vanilla => {
            let records: Vec<VanillaRecord> = triples
                .iter()
                .map(|t| VanillaRecord {
                    id: t.id.clone(),
                    prompt: t.prompt.clone(),
                    response: t.response.clone(),
                })
                .collect();
            write_jsonl(writer, &records)?;
        }
    }
    Ok(())
}

pub fn emit_training_file(
    path: &Path,
    triples: &[TrainingTriple],
    format: TrainingFormat,
) -> Result<(), CuratorError> {
    let file = std::fs::File::create(path)
        .map_err(|source| CuratorError::Io { path: path.display().to_string(), source })?;
    emit_training_records(std::io::BufWriter::new(file), triples, format)
}

/// Ids already present in an output file, for resume runs. A missing
/// file is an empty set; lines without a string `id` are skipped.
pub fn existing_ids(path: &Path) -> Result<BTreeSet<String>, CuratorError> {
    let mut ids = BTreeSet::new();
    let file = match std::fs::File::open(path) {
        Ok(file) => file,
        Err(err) if err.kind() == std::io::ErrorKind::NotFound => return Ok(ids),
        Err(source) => {
            return Err(CuratorError::Io { path: path.display().to_string(), source });
        }
    };
    for line in BufReader::new(file).lines() {
        let line =
            line.map_err(|source| CuratorError::Io { path: path.display().to_string(), source })?;
        if line.trim().is_empty() {
            continue;
        }
        if let Ok(value) = serde_json::from_str::<serde_json::Value>(&line) {
            if let Some(id) = value.get("id").and_then(|v| v.as_str()) {
                ids.insert(id.to_string());
            }
        }
    }
    Ok(ids)
}
