//! JSON Lines readers and writers for every pipeline file format.
//!
//! Readers stream line by line, preserve record order, attach 1-based
//! line numbers to every diagnostic, and reject duplicate ids within a
//! file. Blank lines are skipped but still counted.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::CoreError;
use crate::types::{
    BenchmarkItem, PromptResponsePair, ScoreRecord, TraceRecord, TrainingTriple, VanillaRecord,
};

fn path_label(path: &Path) -> String {
    path.display().to_string()
}

fn file_stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "corpus".to_string(), |s| s.to_string_lossy().into_owned())
}

fn open(path: &Path) -> Result<BufReader<File>, CoreError> {
    Ok(BufReader::new(File::open(path)?))
}

/// Run `handle` on every non-blank line with its 1-based line number.
fn for_each_line<R: BufRead>(
    reader: R,
    mut handle: impl FnMut(u32, &str) -> Result<(), CoreError>,
) -> Result<(), CoreError> {
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        handle(i as u32 + 1, &line)?;
    }
    Ok(())
}

struct IdLedger {
    seen: HashMap<String, u32>,
    path: String,
}

impl IdLedger {
    fn new(path: &str) -> Self {
        IdLedger { seen: HashMap::new(), path: path.to_string() }
    }

    fn admit(&mut self, id: &str, line: u32) -> Result<(), CoreError> {
        if let Some(&first) = self.seen.get(id) {
            return Err(CoreError::DuplicateId {
                path: self.path.clone(),
                line,
                id: id.to_string(),
                first,
            });
        }
        self.seen.insert(id.to_string(), line);
        Ok(())
    }
}

#[derive(serde::Deserialize)]
struct RawPair {
    id: Option<String>,
    prompt: Option<String>,
    response: Option<String>,
    source: Option<String>,
}

/// Parse a raw prompt-response corpus. Records missing an `id` get one
/// synthesized as `<source>-<line>`, falling back to `source_label`
/// (normally the file stem) when the record has no source either.
pub fn parse_pairs_reader<R: BufRead>(
    reader: R,
    path: &str,
    source_label: &str,
) -> Result<Vec<PromptResponsePair>, CoreError> {
    let mut out = Vec::new();
    let mut ids = IdLedger::new(path);
    for_each_line(reader, |line, text| {
        let raw: RawPair = serde_json::from_str(text)
            .map_err(|e| CoreError::malformed(path, line, e.to_string()))?;
        let field = |name: &str, value: Option<String>| -> Result<String, CoreError> {
            match value {
                None => Err(CoreError::malformed(path, line, format!("field '{name}' is missing"))),
                Some(v) if v.trim().is_empty() => {
                    Err(CoreError::malformed(path, line, format!("field '{name}' is empty")))
                }
                Some(v) => Ok(v),
            }
        };
        let prompt = field("prompt", raw.prompt)?;
        let response = field("response", raw.response)?;
        let source = raw.source.unwrap_or_else(|| source_label.to_string());
        let id = raw.id.unwrap_or_else(|| format!("{source}-{line}"));
        ids.admit(&id, line)?;
        out.push(PromptResponsePair { id, prompt, response, source });
        Ok(())
    })?;
    Ok(out)
}

pub fn parse_pairs_file(path: &Path) -> Result<Vec<PromptResponsePair>, CoreError> {
    parse_pairs_reader(open(path)?, &path_label(path), &file_stem(path))
}

/// Generic order-preserving reader with per-record validation.
fn parse_records<T: DeserializeOwned, R: BufRead>(
    reader: R,
    path: &str,
    id_of: impl Fn(&T) -> &str,
    check: impl Fn(&T) -> Result<(), CoreError>,
) -> Result<Vec<T>, CoreError> {
    let mut out = Vec::new();
    let mut ids = IdLedger::new(path);
    for_each_line(reader, |line, text| {
        let record: T = serde_json::from_str(text)
            .map_err(|e| CoreError::malformed(path, line, e.to_string()))?;
        check(&record).map_err(|e| CoreError::malformed(path, line, e.to_string()))?;
        ids.admit(id_of(&record), line)?;
        out.push(record);
        Ok(())
    })?;
    Ok(out)
}

pub fn parse_triples_reader<R: BufRead>(reader: R, path: &str) -> Result<Vec<TrainingTriple>, CoreError> {
    parse_records(reader, path, |t: &TrainingTriple| &t.id, |_| Ok(()))
}

pub fn parse_triples_file(path: &Path) -> Result<Vec<TrainingTriple>, CoreError> {
    parse_triples_reader(open(path)?, &path_label(path))
}

pub fn parse_benchmark_reader<R: BufRead>(reader: R, path: &str) -> Result<Vec<BenchmarkItem>, CoreError> {
    parse_records(reader, path, |i: &BenchmarkItem| &i.id, BenchmarkItem::check)
}

pub fn parse_benchmark_file(path: &Path) -> Result<Vec<BenchmarkItem>, CoreError> {
    parse_benchmark_reader(open(path)?, &path_label(path))
}

pub fn parse_traces_reader<R: BufRead>(reader: R, path: &str) -> Result<Vec<TraceRecord>, CoreError> {
    parse_records(reader, path, TraceRecord::item_id, |r| match r {
        TraceRecord::Trace(t) => t.check(),
        TraceRecord::Failure(_) => Ok(()),
    })
}

pub fn parse_traces_file(path: &Path) -> Result<Vec<TraceRecord>, CoreError> {
    parse_traces_reader(open(path)?, &path_label(path))
}

pub fn parse_vanilla_file(path: &Path) -> Result<Vec<VanillaRecord>, CoreError> {
    parse_records(open(path)?, &path_label(path), |v: &VanillaRecord| &v.id, |_| Ok(()))
}

pub fn parse_score_records_file(path: &Path) -> Result<Vec<ScoreRecord>, CoreError> {
    parse_score_records_reader(open(path)?, &path_label(path))
}

pub fn parse_score_records_reader<R: BufRead>(reader: R, path: &str) -> Result<Vec<ScoreRecord>, CoreError> {
    parse_records(reader, path, |s: &ScoreRecord| &s.id, |s| {
        for (name, stage) in [("stage1", s.stage1.as_ref()), ("stage2", Some(&s.stage2))] {
            if let Some(stage) = stage {
                if stage.n_tokens == 0 {
                    return Err(CoreError::InvalidRecord {
                        id: s.id.clone(),
                        message: format!("{name} has zero tokens"),
                    });
                }
                if (stage.mean_nll * stage.n_tokens as f64 - stage.sum_nll).abs() > 1e-6 {
                    return Err(CoreError::InvalidRecord {
                        id: s.id.clone(),
                        message: format!("{name} mean_nll does not match sum_nll / n_tokens"),
                    });
                }
            }
        }
        Ok(())
    })
}

/// Write one record as a JSONL line.
pub fn write_line<T: Serialize, W: Write>(writer: &mut W, record: &T) -> Result<(), CoreError> {
    serde_json::to_writer(&mut *writer, record)
        .map_err(|e| CoreError::InvalidValue(e.to_string()))?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn write_jsonl<T: Serialize, W: Write>(writer: W, records: &[T]) -> Result<(), CoreError> {
    let mut w = BufWriter::new(writer);
    for r in records {
        write_line(&mut w, r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_jsonl_file<T: Serialize>(path: &Path, records: &[T]) -> Result<(), CoreError> {
    write_jsonl(File::create(path)?, records)
}

/// Write accepted training triples. Any triple whose validation verdict
/// is not accepted aborts the write before a single byte of it lands.
pub fn serialize_triples<W: Write>(writer: W, triples: &[TrainingTriple]) -> Result<(), CoreError> {
    let mut w = BufWriter::new(writer);
    for t in triples {
        if !t.validation.is_accepted() {
            return Err(CoreError::UnvalidatedTriple { id: t.id.clone() });
        }
        write_line(&mut w, t)?;
    }
    w.flush()?;
    Ok(())
}

pub fn serialize_triples_file(path: &Path, triples: &[TrainingTriple]) -> Result<(), CoreError> {
    serialize_triples(File::create(path)?, triples)
}
