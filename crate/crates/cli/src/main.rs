//! `cluster`: seeded clustering benchmark runner.
//!
//! Exit codes: 0 success, 1 validation error (bad flags, bad config, missing
//! or malformed input), 2 runtime failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

mod config;
mod inspect;
mod run;

use config::RunArgs;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Runtime(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(msg) | CliError::Runtime(msg) => write!(f, "{msg}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "cluster",
    version,
    about = "QUBO-based clustering with classical solvers, benchmarked against k-means and SOFM"
)]
enum Cli {
    /// Run experiments and write reports into the output directory
    Run(Box<RunArgs>),
    /// Summarize a serialized artifact (geometry, cluster form, ICM, report)
    Inspect {
        /// Path to an artifact JSON written by `run`
        artifact: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli {
        Cli::Run(args) => run::cmd_run(args),
        Cli::Inspect { artifact } => inspect::cmd_inspect(artifact),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
