//! `report`: join a trace file with its benchmark file and aggregate
//! into metrics, optionally against a baseline run for relative gains.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;

use codeplan_core::{parse_benchmark_file, parse_traces_file, BenchmarkItem, Task, TraceRecord};
use codeplan_metrics::{accuracy, compare_reports, hop_stratified, GainReport, MetricReport};

use crate::config::{resolve, FileConfig, SamplingProfile};
use crate::error::CliError;
use crate::manifest::{config_hash, write_manifest, Manifest};

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Trace file to evaluate (JSONL).
    #[arg(long)]
    traces: PathBuf,
    /// Benchmark file the traces were produced from.
    #[arg(long)]
    bench: PathBuf,
    /// Trace file of a baseline run for relative gains.
    #[arg(long)]
    baseline: Option<PathBuf>,
    /// Output report (JSON).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Serialize)]
struct ReportBundle {
    report: MetricReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    baseline: Option<MetricReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gains: Option<GainReport>,
}

/// QA tasks aggregate EM/F1 per hop count; everything else is accuracy.
fn evaluate(
    traces: &[TraceRecord],
    items: &[BenchmarkItem],
    task: Task,
) -> Result<MetricReport, CliError> {
    let report = match task {
        Task::MultiHopQa => hop_stratified(traces, items)?,
        _ => accuracy(traces, items)?,
    };
    Ok(report)
}

fn headline(report: &MetricReport) -> String {
    match (report.accuracy, report.em, report.f1) {
        (Some(acc), _, _) => format!("accuracy {:.1}%", acc * 100.0),
        (None, Some(em), Some(f1)) => format!("EM {:.1}% / F1 {:.1}%", em * 100.0, f1 * 100.0),
        _ => "no metric".to_string(),
    }
}

fn load_traces(path: &Path) -> Result<Vec<TraceRecord>, CliError> {
    Ok(parse_traces_file(path)?)
}

pub fn run(args: ReportArgs, config: &FileConfig, argv: &[String]) -> Result<(), CliError> {
    let resolved = resolve(config, SamplingProfile::Evaluation)?;
    let items = parse_benchmark_file(&args.bench)?;
    let task = items
        .first()
        .map(|item| item.task)
        .ok_or_else(|| CliError::Data(format!("{} holds no items", args.bench.display())))?;
    let traces = load_traces(&args.traces)?;
    let report = evaluate(&traces, &items, task)?;

    let baseline = match &args.baseline {
        Some(path) => Some(evaluate(&load_traces(path)?, &items, task)?),
        None => None,
    };
    let gains = baseline.as_ref().map(|b| compare_reports(b, &report));

    let bundle = ReportBundle { report, baseline, gains };
    super::ensure_parent(&args.out)?;
    let mut body = serde_json::to_string_pretty(&bundle)
        .map_err(|e| CliError::Data(format!("report serialization failed: {e}")))?;
    body.push('\n');
    std::fs::write(&args.out, body).map_err(|e| CliError::io(&args.out, e))?;

    let mut inputs = vec![args.traces.display().to_string(), args.bench.display().to_string()];
    if let Some(path) = &args.baseline {
        inputs.push(path.display().to_string());
    }
    let counts = BTreeMap::from([
        ("traces".to_string(), traces.len() as u64),
        ("items".to_string(), items.len() as u64),
    ]);
    let manifest = Manifest::new(
        argv,
        config_hash(&resolved.server, &resolved.sampling),
        vec![],
        inputs,
        &args.out,
        counts,
    );
    write_manifest(&manifest, &args.out)?;

    match (&bundle.baseline, &bundle.gains) {
        (Some(base), Some(gains)) => {
            let gain_text = gains
                .accuracy
                .or(gains.em)
                .map(|g| format!(", gain {g}"))
                .unwrap_or_default();
            println!(
                "{} over {} items (baseline {}{}) -> {}",
                headline(&bundle.report),
                bundle.report.n_items,
                headline(base),
                gain_text,
                args.out.display()
            );
        }
        _ => println!(
            "{} over {} items -> {}",
            headline(&bundle.report),
            bundle.report.n_items,
            args.out.display()
        ),
    }
    Ok(())
}
