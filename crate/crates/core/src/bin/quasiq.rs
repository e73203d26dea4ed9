use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use quasiq::scenario::{self, OutputFormat, ScenarioError};

/// Axiom suites, mechanics simulations and quantum measurement
/// experiments, driven by scenario config files.
#[derive(Parser)]
#[command(name = "quasiq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config and write its artifacts.
    Run {
        /// Scenario config file (TOML).
        config: PathBuf,
        /// Master seed; overrides the config and the QUASIQ_SEED
        /// environment variable.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for artifacts.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Summary file format.
        #[arg(long, value_enum, default_value_t = Format::Jsonl)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

fn env_seed() -> Result<Option<u64>, ScenarioError> {
    match std::env::var("QUASIQ_SEED") {
        Ok(v) => v
            .parse::<u64>()
            .map(Some)
            .map_err(|_| ScenarioError::Config(format!("QUASIQ_SEED is not an integer: `{v}`"))),
        Err(_) => Ok(None),
    }
}

fn run() -> Result<bool, ScenarioError> {
    let cli = Cli::parse();
    let Command::Run {
        config,
        seed,
        out,
        format,
    } = cli.command;
    let cfg = scenario::load_config(&config)?;
    let seed = match seed {
        Some(s) => Some(s),
        None => env_seed()?,
    };
    let format = match format {
        Format::Csv => OutputFormat::Csv,
        Format::Jsonl => OutputFormat::Jsonl,
    };
    let summary = scenario::run(&cfg, seed, &out, format)?;
    eprintln!(
        "{}: {} passed, {} failed ({:.2}s)",
        summary.kind, summary.checks_passed, summary.checks_failed, summary.duration_secs
    );
    Ok(summary.all_pass())
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ (ScenarioError::Config(_) | ScenarioError::Io(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
