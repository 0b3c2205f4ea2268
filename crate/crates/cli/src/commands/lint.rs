//! `plan-lint validate`: structural validation of plans from a JSONL
//! file, one report line per input line.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Subcommand};
use serde::Serialize;

use codeplan_lint::{validate_plan, ValidateOptions, ValidationReport, Verdict};

use crate::config::{resolve, FileConfig, SamplingProfile};
use crate::error::CliError;
use crate::manifest::{config_hash, write_manifest, Manifest};

#[derive(Debug, Args)]
pub struct PlanLintCmd {
    #[command(subcommand)]
    action: PlanLintAction,
}

#[derive(Debug, Subcommand)]
enum PlanLintAction {
    /// Validate plans from a JSONL file, one report per line.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// JSONL input; each line holds {"plan": "..."} and optionally an "id".
    #[arg(long = "in", value_name = "PLANS")]
    input: PathBuf,
    /// Word budget enforced by the length rule.
    #[arg(long, default_value_t = 200)]
    max_words: usize,
    /// Optional output path; default is stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct LintLine {
    #[serde(skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    report: ValidationReport,
}

pub fn run(cmd: PlanLintCmd, config: &FileConfig, argv: &[String]) -> Result<(), CliError> {
    let PlanLintAction::Validate(args) = cmd.action;
    let options = ValidateOptions { max_words: args.max_words, ..Default::default() };
    let text = std::fs::read_to_string(&args.input).map_err(|e| CliError::io(&args.input, e))?;

    let mut lines = Vec::new();
    let mut accepted = 0usize;
    for (index, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value = serde_json::from_str(line).map_err(|e| {
            CliError::Data(format!("{} line {}: not JSON: {e}", args.input.display(), index + 1))
        })?;
        let plan = value.get("plan").and_then(|v| v.as_str()).ok_or_else(|| {
            CliError::Data(format!(
                "{} line {}: missing string field \"plan\"",
                args.input.display(),
                index + 1
            ))
        })?;
        let id = value.get("id").and_then(|v| v.as_str()).map(str::to_string);
        let report = validate_plan(plan, &options);
        if report.verdict == Verdict::Accepted {
            accepted += 1;
        }
        let mut serialized = serde_json::to_string(&LintLine { id, report })
            .map_err(|e| CliError::Data(format!("report serialization failed: {e}")))?;
        serialized.push('\n');
        lines.push(serialized);
    }

    let n = lines.len();
    match &args.out {
        Some(out) => {
            super::ensure_parent(out)?;
            std::fs::write(out, lines.concat()).map_err(|e| CliError::io(out, e))?;
            let resolved = resolve(config, SamplingProfile::Evaluation)?;
            let counts = BTreeMap::from([
                ("plans".to_string(), n as u64),
                ("accepted".to_string(), accepted as u64),
            ]);
            let manifest = Manifest::new(
                argv,
                config_hash(&resolved.server, &resolved.sampling),
                vec![],
                vec![args.input.display().to_string()],
                out,
                counts,
            );
            write_manifest(&manifest, out)?;
            println!("validated {n} plans: {accepted} accepted -> {}", out.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            for line in &lines {
                stdout
                    .write_all(line.as_bytes())
                    .map_err(|e| CliError::Data(format!("cannot write to stdout: {e}")))?;
            }
        }
    }
    Ok(())
}
