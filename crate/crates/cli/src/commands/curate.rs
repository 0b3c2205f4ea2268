//! `curate`: annotate prompt-response pairs with plans over the model
//! server, filter structurally invalid plans, and emit training records.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;

use codeplan_core::{parse_pairs_file, write_jsonl_file, PlanKind};
use codeplan_curator::{
    curate_pairs, emit_training_records, existing_ids, CurationOptions, TrainingFormat,
};

use crate::config::{resolve, FileConfig, SamplingProfile};
use crate::error::CliError;
use crate::manifest::{config_hash, write_manifest, Manifest};

#[derive(Debug, Args)]
pub struct CurateArgs {
    /// Input prompt-response pairs, one JSON object per line.
    #[arg(long = "in", value_name = "PAIRS")]
    input: PathBuf,
    /// Output file for accepted training records.
    #[arg(long)]
    out: PathBuf,
    /// Plan style: code, nl, or exec.
    #[arg(long)]
    kind: String,
    /// Model name, overriding the configured one.
    #[arg(long)]
    model: Option<String>,
    /// Maximum simultaneous requests, overriding the configured value.
    #[arg(long)]
    concurrency: Option<usize>,
    /// Skip ids already present in the output file and append new ones.
    #[arg(long)]
    resume: bool,
    /// Serve completions from a fixture directory instead of HTTP.
    #[arg(long, value_name = "DIR")]
    mock_server: Option<PathBuf>,
    /// Output layout: triple (prompt, plan, response) or vanilla (no plan).
    #[arg(long, default_value = "triple")]
    format: String,
    /// Ask for up to two fresh completions when a plan fails validation.
    #[arg(long)]
    resample: bool,
}

pub fn run(args: CurateArgs, config: &FileConfig, argv: &[String]) -> Result<(), CliError> {
    let mut resolved = resolve(config, SamplingProfile::Curation)?;
    if let Some(model) = &args.model {
        resolved.server.model = model.clone();
    }
    if let Some(n) = args.concurrency {
        resolved.server.max_concurrent = n;
    }
    let kind: PlanKind = args.kind.parse()?;
    let format: TrainingFormat = args.format.parse()?;

    let mut pairs = parse_pairs_file(&args.input)?;
    let n_total = pairs.len();
    if args.resume {
        let done = existing_ids(&args.out)?;
        pairs.retain(|pair| !done.contains(&pair.id));
        tracing::info!(
            skipped = n_total - pairs.len(),
            pending = pairs.len(),
            "resuming from existing output"
        );
    }
    let n_skipped = n_total - pairs.len();

    let transport = super::make_transport(args.mock_server.as_deref(), &resolved.server)?;
    let options = CurationOptions { resample_on_invalid: args.resample, ..Default::default() };
    let batch = super::runtime()?.block_on(curate_pairs(
        &pairs,
        &transport,
        &resolved.server,
        &resolved.sampling,
        kind,
        &options,
    ))?;

    super::ensure_parent(&args.out)?;
    let file = std::fs::OpenOptions::new()
        .create(true)
        .append(args.resume)
        .truncate(!args.resume)
        .write(true)
        .open(&args.out)
        .map_err(|e| CliError::io(&args.out, e))?;
    emit_training_records(std::io::BufWriter::new(file), &batch.output.accepted, format)?;
    if !batch.output.rejected.is_empty() {
        write_jsonl_file(&super::sibling_path(&args.out, "rejected"), &batch.output.rejected)?;
    }
    if !batch.output.failed.is_empty() {
        write_jsonl_file(&super::sibling_path(&args.out, "failures"), &batch.output.failed)?;
    }

    let stats = &batch.stats;
    let counts = BTreeMap::from([
        ("input".to_string(), n_total as u64),
        ("skipped_resume".to_string(), n_skipped as u64),
        ("annotated".to_string(), stats.n_annotated as u64),
        ("accepted".to_string(), stats.n_accepted as u64),
        ("rejected".to_string(), stats.n_rejected() as u64),
        ("failed".to_string(), batch.output.failed.len() as u64),
    ]);
    let seeds = resolved.sampling.seed.into_iter().collect();
    let manifest = Manifest::new(
        argv,
        config_hash(&resolved.server, &resolved.sampling),
        seeds,
        vec![args.input.display().to_string()],
        &args.out,
        counts,
    );
    write_manifest(&manifest, &args.out)?;

    println!(
        "curated {} pairs: {} accepted, {} rejected, {} failed{} -> {}",
        pairs.len(),
        stats.n_accepted,
        stats.n_rejected(),
        batch.output.failed.len(),
        if n_skipped > 0 { format!(" ({n_skipped} skipped via resume)") } else { String::new() },
        args.out.display()
    );
    let pretty = serde_json::to_string_pretty(stats)
        .map_err(|e| CliError::Data(format!("stats serialization failed: {e}")))?;
    println!("{pretty}");
    Ok(())
}
