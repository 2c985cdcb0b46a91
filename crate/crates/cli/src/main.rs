//! `morphrepair`: detect, mutate, repair, report.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("campaign health: {0}")]
    Health(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Health(_) => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "morphrepair", version, about = "Robustness campaigns for LLM-based Java program repair")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Find the relations that change each sample; writes lists.json.
    Detect,
    /// Generate mutants for every sample and distance.
    Mutate,
    /// Ask the model to repair every mutant and judge the patches.
    Repair,
    /// Summarize attempts into Markdown and CSV tables.
    Report,
    /// Write perturbed/original pairs as JSON lines.
    ExportPairs,
}

#[derive(Debug, Args)]
struct Opts {
    /// Campaign configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Perturbation distances, e.g. `1..3`.
    #[arg(long, global = true)]
    pd: Option<String>,
    /// Combinations kept per distance.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Relation subset, e.g. `m1,m3,m9`.
    #[arg(long, global = true)]
    mrs: Option<String>,
    /// Scripted mock endpoint (JSON) used instead of the configured model URL.
    #[arg(long, global = true)]
    mock: Option<PathBuf>,
    /// Continue past samples that fail to mutate.
    #[arg(long, global = true)]
    keep_going: bool,
    /// With `report`, also write pairs.jsonl.
    #[arg(long, global = true)]
    export_pairs: bool,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let o = cli.opts;
    let overrides = config::Overrides { seed: o.seed, pd: o.pd, cap: o.cap, mrs: o.mrs, out: o.out.clone() };
    let resolved = || -> Result<config::Resolved, CliError> {
        let path = o.config.as_ref().ok_or_else(|| CliError::Config("--config is required".into()))?;
        config::load(path, &overrides)
    };
    match cli.command {
        Command::Detect => commands::detect(&resolved()?).map(|_| ()),
        Command::Mutate => commands::mutate(&resolved()?, o.keep_going),
        Command::Repair => commands::repair(&resolved()?, o.mock.as_deref()),
        Command::Report => commands::report(&resolved()?, o.export_pairs),
        Command::ExportPairs => {
            let out = match (&o.out, &o.config) {
                (Some(out), _) => out.clone(),
                (None, Some(_)) => resolved()?.out,
                (None, None) => return Err(CliError::Config("--out or --config is required".into())),
            };
            commands::export(&out.join("mutants"), &out.join("pairs.jsonl"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("morphrepair: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
