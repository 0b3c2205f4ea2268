//! Resumable benchmark runs writing an append-only trace file.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;

use codeplan_client::{ChatTransport, SamplingParams, ServerConfig};
use codeplan_core::{parse_traces_file, BenchmarkItem, Mode, TraceFailure, TraceRecord};
use futures::stream::{self, StreamExt};
use tokio::sync::mpsc;

use crate::error::RunnerError;
use crate::fewshot::FewShotSet;
use crate::generate::generate;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub n_items: usize,
    /// Items whose id was already in the trace file.
    pub n_skipped: usize,
    pub n_new_traces: usize,
    pub n_new_failures: usize,
}

/// Runs every item not already present in the trace file, appending
/// one line per item as results complete. Per-item transport failures
/// become failure records; fatal transport errors abort the run, and
/// whatever was already appended stays valid for resume.
pub async fn run_benchmark<T: ChatTransport>(
    items: &[BenchmarkItem],
    shots: &FewShotSet,
    mode: Mode,
    transport: &T,
    server: &ServerConfig,
    sampling: &SamplingParams,
    two_call: bool,
    out_path: &Path,
) -> Result<RunSummary, RunnerError> {
    let existing = existing_trace_ids(out_path)?;
    let pending: Vec<&BenchmarkItem> =
        items.iter().filter(|item| !existing.contains(&item.id)).collect();
    let mut summary = RunSummary {
        n_items: items.len(),
        n_skipped: items.len() - pending.len(),
        ..RunSummary::default()
    };

    // Single writer: producers hand completed records over a queue and
    // never touch the file.
    let (sender, mut receiver) = mpsc::channel::<TraceRecord>(64);
    let file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(out_path)
        .map_err(|source| RunnerError::Io { path: out_path.display().to_string(), source })?;
    let writer_path = out_path.display().to_string();
    let writer = tokio::spawn(async move {
        let mut file = file;
        while let Some(record) = receiver.recv().await {
            let line = serde_json::to_string(&record)
                .expect("trace records always serialize");
            file.write_all(line.as_bytes()).and_then(|_| file.write_all(b"\n")).and_then(|_| file.flush())?;
        }
        Ok::<(), std::io::Error>(())
    });

    let jobs = pending.iter().map(|item| async move {
        match generate(item, shots, mode, transport, server, sampling, two_call).await {
            Ok(trace) => Ok(TraceRecord::Trace(trace)),
            Err(RunnerError::Transport(err)) if !err.is_fatal() => {
                tracing::warn!(item = %item.id, error = %err, "item failed");
                Ok(TraceRecord::Failure(TraceFailure {
                    item_id: item.id.clone(),
                    error: err.to_string(),
                }))
            }
            Err(err) => Err(err),
        }
    });

    let mut completions = stream::iter(jobs).buffer_unordered(server.max_concurrent.max(1));
    let mut run_error = None;
    while let Some(result) = completions.next().await {
        match result {
            Ok(record) => {
                match &record {
                    TraceRecord::Trace(_) => summary.n_new_traces += 1,
                    TraceRecord::Failure(_) => summary.n_new_failures += 1,
                }
                if sender.send(record).await.is_err() {
                    break;
                }
            }
            Err(err) => {
                run_error = Some(err);
                break;
            }
        }
    }
    drop(completions);
    drop(sender);
    writer
        .await
        .expect("writer task never panics")
        .map_err(|source| RunnerError::Io { path: writer_path, source })?;

    match run_error {
        Some(err) => Err(err),
        None => Ok(summary),
    }
}

/// Item ids already recorded in a trace file; missing file means none.
pub fn existing_trace_ids(path: &Path) -> Result<BTreeSet<String>, RunnerError> {
    if !path.exists() {
        return Ok(BTreeSet::new());
    }
    let records = parse_traces_file(path)?;
    Ok(records.iter().map(|r| r.item_id().to_string()).collect())
}
