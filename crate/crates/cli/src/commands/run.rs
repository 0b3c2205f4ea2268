//! `run`: few-shot generation over a benchmark file. Restarting with
//! the same output file skips items that already have a line in it.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;

use codeplan_core::{parse_benchmark_file, Mode};
use codeplan_runner::{load_fewshot, run_benchmark};

use crate::config::{resolve, FileConfig, SamplingProfile};
use crate::error::CliError;
use crate::manifest::{config_hash, write_manifest, Manifest};

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Benchmark items file (JSONL).
    #[arg(long)]
    bench: PathBuf,
    /// Prompting mode: direct, ps, or codeplan.
    #[arg(long)]
    mode: String,
    /// Few-shot exemplar file (JSONL).
    #[arg(long)]
    shots: PathBuf,
    /// How many exemplars to put in the prompt.
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Output trace file; existing lines are kept and their items skipped.
    #[arg(long)]
    out: PathBuf,
    /// Model name, overriding the configured one.
    #[arg(long)]
    model: Option<String>,
    /// Maximum simultaneous requests, overriding the configured value.
    #[arg(long)]
    concurrency: Option<usize>,
    /// Ask for the plan and the response in two separate requests.
    #[arg(long)]
    two_call: bool,
    /// Serve completions from a fixture directory instead of HTTP.
    #[arg(long, value_name = "DIR")]
    mock_server: Option<PathBuf>,
}

pub fn run(args: RunArgs, config: &FileConfig, argv: &[String]) -> Result<(), CliError> {
    let mut resolved = resolve(config, SamplingProfile::Evaluation)?;
    if let Some(model) = &args.model {
        resolved.server.model = model.clone();
    }
    if let Some(n) = args.concurrency {
        resolved.server.max_concurrent = n;
    }
    let mode: Mode = args.mode.parse()?;
    let items = parse_benchmark_file(&args.bench)?;
    let shots = load_fewshot(&args.shots, args.k)?;
    let transport = super::make_transport(args.mock_server.as_deref(), &resolved.server)?;

    super::ensure_parent(&args.out)?;
    let summary = super::runtime()?.block_on(run_benchmark(
        &items,
        &shots,
        mode,
        &transport,
        &resolved.server,
        &resolved.sampling,
        args.two_call,
        &args.out,
    ))?;

    let counts = BTreeMap::from([
        ("items".to_string(), summary.n_items as u64),
        ("skipped".to_string(), summary.n_skipped as u64),
        ("new_traces".to_string(), summary.n_new_traces as u64),
        ("new_failures".to_string(), summary.n_new_failures as u64),
    ]);
    let seeds = resolved.sampling.seed.into_iter().collect();
    let manifest = Manifest::new(
        argv,
        config_hash(&resolved.server, &resolved.sampling),
        seeds,
        vec![args.bench.display().to_string(), args.shots.display().to_string()],
        &args.out,
        counts,
    );
    write_manifest(&manifest, &args.out)?;

    println!(
        "ran {} items in {} mode: {} skipped, {} new traces, {} failures -> {}",
        summary.n_items,
        mode,
        summary.n_skipped,
        summary.n_new_traces,
        summary.n_new_failures,
        args.out.display()
    );
    Ok(())
}
