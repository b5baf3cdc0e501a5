//! `cohthermo` — run verification suites, Jaynes-Cummings/micromaser
//! simulations and engine sweeps from the command line, emitting CSV and
//! JSON artifacts for plotting.
//!
//! Every numeric parameter can come from a JSON config file (`--config`);
//! explicit flags override file values. Output files land in the directory
//! named by `COHTHERMO_OUT` (default: current directory) unless `--out` is
//! absolute. Exit codes: 0 pass, 1 tolerance failure, 2 usage error.

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "cohthermo", version, about = "Coherent-reservoir thermodynamics simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the entropy-balance identity and its decomposition on seeded
    /// random instances.
    VerifyIdentities(commands::verify::Args),
    /// Tabulate exact, closed-form and short-time Jaynes-Cummings dynamics
    /// over a time grid.
    JcEvolve(commands::jc_evolve::Args),
    /// Run a repeated-interaction (micromaser) simulation and compare the
    /// coherence loss with the Γ law.
    Micromaser(commands::micromaser::Args),
    /// Sweep engine-cycle parameters and tabulate efficiencies and work.
    EngineSweep(commands::engine_sweep::Args),
}

/// Failures mapped to process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config file, invalid physical parameters: exit 2.
    Usage(String),
    /// The run completed but a tolerance or invariant failed: exit 1.
    Tolerance(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Tolerance(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Tolerance(m) => m,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("io error: {e}"))
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::VerifyIdentities(args) => commands::verify::run(args),
        Command::JcEvolve(args) => commands::jc_evolve::run(args),
        Command::Micromaser(args) => commands::micromaser::run(args),
        Command::EngineSweep(args) => commands::engine_sweep::run(args),
    };
    if let Err(e) = result {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}
