//! codeplan: one binary exposing the plan data pipeline end to end.
//! Subcommands cover annotation (curate), benchmark generation
//! (genbench), few-shot evaluation (run), teacher-forced scoring
//! (score), aggregation (report, stats), and plan validation
//! (plan-lint). Exit codes: 0 success, 1 usage or data error,
//! 2 transport failure.

mod commands;
mod config;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "codeplan",
    version,
    about = "Curation and evaluation pipeline for code-form reasoning plans"
)]
struct Cli {
    /// TOML configuration file; CODEPLAN_* environment variables override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Log filter written to stderr (error, warn, info, debug, trace).
    #[arg(long, global = true, value_name = "LEVEL")]
    log_level: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Annotate prompt-response pairs with plans and filter the results.
    Curate(commands::curate::CurateArgs),
    /// Generate symbolic benchmarks or ingest external QA datasets.
    Genbench(commands::genbench::GenbenchCmd),
    /// Run few-shot evaluation over a benchmark file.
    Run(commands::run::RunArgs),
    /// Teacher-forced two-stage scoring of training records.
    Score(commands::score::ScoreArgs),
    /// Aggregate a trace file into metrics, optionally against a baseline.
    Report(commands::report::ReportArgs),
    /// Corpus statistics for a triple file.
    Stats(commands::stats::StatsArgs),
    /// Structural plan validation.
    #[command(name = "plan-lint")]
    PlanLint(commands::lint::PlanLintCmd),
}

fn init_logging(flag: Option<&str>, configured: Option<&str>) {
    let level = flag.or(configured).unwrap_or("info");
    let filter = tracing_subscriber::EnvFilter::try_new(level)
        .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info"));
    let _ = tracing_subscriber::fmt()
        .with_env_filter(filter)
        .with_writer(std::io::stderr)
        .try_init();
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let file = config::load_config(cli.config.as_deref())?;
    init_logging(cli.log_level.as_deref(), file.log_level.as_deref());
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match cli.command {
        Command::Curate(args) => commands::curate::run(args, &file, &argv),
        Command::Genbench(cmd) => commands::genbench::run(cmd, &file, &argv),
        Command::Run(args) => commands::run::run(args, &file, &argv),
        Command::Score(args) => commands::score::run(args, &file, &argv),
        Command::Report(args) => commands::report::run(args, &file, &argv),
        Command::Stats(args) => commands::stats::run(args, &file, &argv),
        Command::PlanLint(cmd) => commands::lint::run(cmd, &file, &argv),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are successful outputs, not errors.
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code())
        }
    }
}
