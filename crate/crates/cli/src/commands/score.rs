//! `score`: teacher-forced two-stage scoring. For each triple the plan
//! is scored given the prompt, then the response given prompt and plan,
//! with the second context exactly extending the first so the two sums
//! add up to the whole-sequence score. Vanilla records (no plan) get a
//! response stage only.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;

use codeplan_client::ChatTransport;
use codeplan_core::{
    parse_triples_file, parse_vanilla_file, render_plan_block, write_jsonl_file, ScoreRecord,
};
use codeplan_metrics::{decompose_records, decompose_records_token_weighted};
use codeplan_runner::{score_sequence, ScoreRequest};

use crate::config::{resolve, FileConfig, SamplingProfile};
use crate::error::CliError;
use crate::manifest::{config_hash, write_manifest, Manifest};

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Training records to score, triple or vanilla layout (JSONL).
    #[arg(long, value_name = "RECORDS")]
    triples: PathBuf,
    /// Output file of per-record stage scores.
    #[arg(long)]
    out: PathBuf,
    /// Model name, overriding the configured one.
    #[arg(long)]
    model: Option<String>,
    /// Serve scores from a fixture directory instead of HTTP.
    #[arg(long, value_name = "DIR")]
    mock_server: Option<PathBuf>,
}

/// The two teacher-forcing requests for one record. `stage1` is absent
/// for plan-free records; `stage2.context` always extends the full
/// stage-1 text so per-stage sums are additive.
struct StagePair {
    id: String,
    stage1: Option<ScoreRequest>,
    stage2: ScoreRequest,
}

fn triple_stages(id: &str, prompt: &str, plan: &str, response: &str) -> StagePair {
    let context1 = format!("{prompt}\n");
    let target1 = format!("{}\n", render_plan_block(plan));
    let context2 = format!("{context1}{target1}");
    StagePair {
        id: id.to_string(),
        stage1: Some(ScoreRequest::new(context1, target1)),
        stage2: ScoreRequest::new(context2, response),
    }
}

fn vanilla_stages(id: &str, prompt: &str, response: &str) -> StagePair {
    StagePair {
        id: id.to_string(),
        stage1: None,
        stage2: ScoreRequest::new(format!("{prompt}\n"), response),
    }
}

/// A line with a "plan" field means triples; otherwise vanilla records.
fn load_stage_pairs(path: &PathBuf) -> Result<Vec<StagePair>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let first = text
        .lines()
        .find(|line| !line.trim().is_empty())
        .ok_or_else(|| CliError::Data(format!("{} is empty", path.display())))?;
    let probe: serde_json::Value = serde_json::from_str(first)
        .map_err(|e| CliError::Data(format!("{} line 1 is not JSON: {e}", path.display())))?;
    if probe.get("plan").is_some() {
        let triples = parse_triples_file(path)?;
        Ok(triples
            .iter()
            .map(|t| triple_stages(&t.id, &t.prompt, &t.plan, &t.response))
            .collect())
    } else {
        let records = parse_vanilla_file(path)?;
        Ok(records.iter().map(|r| vanilla_stages(&r.id, &r.prompt, &r.response)).collect())
    }
}

async fn score_all<T: ChatTransport>(
    pairs: &[StagePair],
    transport: &T,
) -> Result<Vec<ScoreRecord>, CliError> {
    let mut records = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let stage1 = match &pair.stage1 {
            Some(request) => Some(score_sequence(transport, request).await?),
            None => None,
        };
        let stage2 = score_sequence(transport, &pair.stage2).await?;
        records.push(ScoreRecord { id: pair.id.clone(), stage1, stage2 });
    }
    Ok(records)
}

pub fn run(args: ScoreArgs, config: &FileConfig, argv: &[String]) -> Result<(), CliError> {
    let mut resolved = resolve(config, SamplingProfile::Evaluation)?;
    if let Some(model) = &args.model {
        resolved.server.model = model.clone();
    }
    let pairs = load_stage_pairs(&args.triples)?;
    let transport = super::make_transport(args.mock_server.as_deref(), &resolved.server)?;
    let records = super::runtime()?.block_on(score_all(&pairs, &transport))?;

    super::ensure_parent(&args.out)?;
    write_jsonl_file(&args.out, &records)?;

    let counts = BTreeMap::from([("records".to_string(), records.len() as u64)]);
    let manifest = Manifest::new(
        argv,
        config_hash(&resolved.server, &resolved.sampling),
        vec![],
        vec![args.triples.display().to_string()],
        &args.out,
        counts,
    );
    write_manifest(&manifest, &args.out)?;

    println!("scored {} records -> {}", records.len(), args.out.display());
    // Both aggregations are reported: the token-weighted one treats the
    // corpus as one long sequence, the record-mean one weighs every
    // record equally. They differ whenever lengths vary.
    let token = decompose_records_token_weighted(&records)?;
    let record = decompose_records(&records)?;
    println!(
        "token-weighted nll: plan {:.6} + response {:.6} = {:.6}",
        token.stage1, token.stage2, token.overall
    );
    println!(
        "record-mean    nll: plan {:.6} + response {:.6} = {:.6}",
        record.stage1, record.stage2, record.overall
    );
    Ok(())
}
