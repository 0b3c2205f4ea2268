//! `genbench`: seeded symbolic benchmark generation, plus `ingest-qa`
//! for converting external multi-hop QA dumps.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Subcommand};

use codeplan_benchgen::{generate, ingest_qa, GenSpec, HopFilter, QaFormat, TaskSpec};
use codeplan_core::write_jsonl_file;

use crate::config::{resolve, FileConfig, SamplingProfile};
use crate::error::CliError;
use crate::manifest::{config_hash, write_manifest, Manifest};

#[derive(Debug, Args)]
#[command(subcommand_negates_reqs = true, args_conflicts_with_subcommands = true)]
pub struct GenbenchCmd {
    #[command(subcommand)]
    sub: Option<GenbenchSub>,
    #[command(flatten)]
    gen: Option<GenArgs>,
}

#[derive(Debug, Subcommand)]
enum GenbenchSub {
    /// Convert a raw MuSiQue or HotpotQA dump into benchmark items.
    IngestQa(IngestArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Task family: coinflip, lastletter, boolean, or dyck.
    #[arg(long)]
    task: String,
    /// Number of items to generate.
    #[arg(long)]
    n: usize,
    /// Seed; the same seed always yields the same file.
    #[arg(long)]
    seed: u64,
    /// Output benchmark file (JSONL).
    #[arg(long)]
    out: PathBuf,
    /// coinflip: flips per item.
    #[arg(long, default_value_t = 4)]
    flips: usize,
    /// lastletter: words per item.
    #[arg(long, default_value_t = 4)]
    words: usize,
    /// boolean: maximum operator nesting depth.
    #[arg(long, default_value_t = 3)]
    max_depth: usize,
    /// boolean: fewest literals per expression.
    #[arg(long, default_value_t = 2)]
    min_atoms: usize,
    /// boolean: most literals per expression.
    #[arg(long, default_value_t = 4)]
    max_atoms: usize,
    /// dyck: shortest prefix in tokens.
    #[arg(long, default_value_t = 4)]
    min_prefix: usize,
    /// dyck: longest prefix in tokens.
    #[arg(long, default_value_t = 16)]
    max_prefix: usize,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Raw dataset dump as published upstream.
    #[arg(long = "in", value_name = "RAW")]
    input: PathBuf,
    /// Source format: musique or hotpotqa.
    #[arg(long)]
    format: String,
    /// Output benchmark file (JSONL).
    #[arg(long)]
    out: PathBuf,
    /// Keep only this hop count: 2, 3, 4, or all.
    #[arg(long, default_value = "all")]
    hops: String,
}

pub fn run(cmd: GenbenchCmd, config: &FileConfig, argv: &[String]) -> Result<(), CliError> {
    match (cmd.sub, cmd.gen) {
        (Some(GenbenchSub::IngestQa(args)), _) => ingest(args, config, argv),
        (None, Some(args)) => gen(args, config, argv),
        (None, None) => Err(CliError::Usage(
            "genbench needs either generation flags or the ingest-qa subcommand".into(),
        )),
    }
}

fn task_spec(args: &GenArgs) -> Result<TaskSpec, CliError> {
    match args.task.as_str() {
        "coinflip" => Ok(TaskSpec::CoinFlip { num_flips: args.flips }),
        "lastletter" => Ok(TaskSpec::LastLetter { num_words: args.words, lexicon: None }),
        "boolean" => Ok(TaskSpec::Boolean {
            max_depth: args.max_depth,
            min_atoms: args.min_atoms,
            max_atoms: args.max_atoms,
        }),
        "dyck" => Ok(TaskSpec::Dyck {
            min_prefix: args.min_prefix,
            max_prefix: args.max_prefix,
            families: codeplan_benchgen::all_families(),
        }),
        "multihopqa" => Err(CliError::Usage(
            "multihopqa items are ingested, not generated; use `genbench ingest-qa`".into(),
        )),
        other => Err(CliError::Usage(format!(
            "unknown task '{other}' (expected coinflip, lastletter, boolean, or dyck)"
        ))),
    }
}

fn gen(args: GenArgs, config: &FileConfig, argv: &[String]) -> Result<(), CliError> {
    let resolved = resolve(config, SamplingProfile::Evaluation)?;
    let spec = GenSpec { n: args.n, seed: args.seed, task: task_spec(&args)? };
    let items = generate(&spec)?;
    super::ensure_parent(&args.out)?;
    write_jsonl_file(&args.out, &items)?;
    let manifest = Manifest::new(
        argv,
        config_hash(&resolved.server, &resolved.sampling),
        vec![args.seed],
        vec![],
        &args.out,
        BTreeMap::from([("items".to_string(), items.len() as u64)]),
    );
    write_manifest(&manifest, &args.out)?;
    println!("generated {} {} items -> {}", items.len(), args.task, args.out.display());
    Ok(())
}

fn ingest(args: IngestArgs, config: &FileConfig, argv: &[String]) -> Result<(), CliError> {
    let resolved = resolve(config, SamplingProfile::Evaluation)?;
    let format: QaFormat = args.format.parse()?;
    let filter: HopFilter = args.hops.parse()?;
    let raw = std::fs::read_to_string(&args.input).map_err(|e| CliError::io(&args.input, e))?;
    let mut items = ingest_qa(&raw, format, &args.input.display().to_string())?;
    if let HopFilter::Only(h) = filter {
        items.retain(|item| item.hops == Some(h));
    }
    if items.is_empty() {
        return Err(CliError::Data(format!(
            "{} yielded no items after the hop filter",
            args.input.display()
        )));
    }
    super::ensure_parent(&args.out)?;
    write_jsonl_file(&args.out, &items)?;
    let manifest = Manifest::new(
        argv,
        config_hash(&resolved.server, &resolved.sampling),
        vec![],
        vec![args.input.display().to_string()],
        &args.out,
        BTreeMap::from([("items".to_string(), items.len() as u64)]),
    );
    write_manifest(&manifest, &args.out)?;
    println!("ingested {} multihopqa items -> {}", items.len(), args.out.display());
    Ok(())
}
