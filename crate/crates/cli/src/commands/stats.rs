//! `stats`: corpus statistics for a training-triple file.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;

use codeplan_core::parse_triples_file;
use codeplan_curator::corpus_stats;

use crate::config::{resolve, FileConfig, SamplingProfile};
use crate::error::CliError;
use crate::manifest::{config_hash, write_manifest, Manifest};

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Triple file to summarize (JSONL).
    #[arg(long = "in", value_name = "TRIPLES")]
    input: PathBuf,
    /// Optional JSON output path; stdout always gets the stats.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: StatsArgs, config: &FileConfig, argv: &[String]) -> Result<(), CliError> {
    let triples = parse_triples_file(&args.input)?;
    let stats = corpus_stats(&triples);
    let mut body = serde_json::to_string_pretty(&stats)
        .map_err(|e| CliError::Data(format!("stats serialization failed: {e}")))?;
    body.push('\n');
    print!("{body}");

    if let Some(out) = &args.out {
        let resolved = resolve(config, SamplingProfile::Evaluation)?;
        super::ensure_parent(out)?;
        std::fs::write(out, &body).map_err(|e| CliError::io(out, e))?;
        let counts = BTreeMap::from([("records".to_string(), triples.len() as u64)]);
        let manifest = Manifest::new(
            argv,
            config_hash(&resolved.server, &resolved.sampling),
            vec![],
            vec![args.input.display().to_string()],
            out,
            counts,
        );
        write_manifest(&manifest, out)?;
    }
    Ok(())
}
