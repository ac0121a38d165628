//! Batch front-end for `pseudogap-core`.
//!
//! Each subcommand reads a JSON [`RunConfig`](config::RunConfig), runs one
//! family of estimators and writes CSV or JSON into the output directory.

pub mod commands;
pub mod config;
pub mod output;

use clap::{Parser, ValueEnum};
use pseudogap_core::Error;
use std::path::PathBuf;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
    #[error("under-resolved: {0}")]
    UnderResolved(String),
    #[error("invariant violation: {0}")]
    Violation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl CliError {
    /// 2 config, 3 under-resolved fit, 4 invariant violation, 5 unsupported
    /// case, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::UnderResolved(_) => 3,
            CliError::Violation(_) => 4,
            CliError::Unsupported(_) => 5,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(m) | Error::Domain(m) => CliError::Config(m),
            Error::Degenerate(m) => CliError::Config(format!("degenerate ensemble: {m}")),
            Error::UnderResolved { .. } => CliError::UnderResolved(e.to_string()),
            Error::Consistency(m) => CliError::Violation(m),
            Error::Unsupported(m) => CliError::Unsupported(m),
            Error::NoRoot(m) => CliError::Unsupported(format!("no root: {m}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Eigenvalues of sampled H_N and their histogram.
    Spectrum,
    /// IDS by eigenvalue counting on an energy grid.
    Ids,
    /// IDS by the polymer rotation number and loop counts.
    Rotation,
    /// Solves the moment equation for the Hölder exponent.
    Nu,
    /// Lyapunov exponent on an energy grid.
    Lyapunov,
    /// Loop interarrival statistics.
    Renewal,
    /// Power-law fit of IDS increments.
    Holder,
    /// Region lemmas, large-deviation bound, oscillation and sign checks.
    Verify,
    /// Critical-energy data as JSON.
    Criticaldata,
    /// One phase trajectory as CSV.
    Trajectory,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Ids => "ids",
            Command::Rotation => "rotation",
            Command::Nu => "nu",
            Command::Lyapunov => "lyapunov",
            Command::Renewal => "renewal",
            Command::Holder => "holder",
            Command::Verify => "verify",
            Command::Criticaldata => "criticaldata",
            Command::Trajectory => "trajectory",
        }
    }

    pub fn is_stochastic(&self) -> bool {
        !matches!(self, Command::Nu | Command::Criticaldata)
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "pseudogap-lab", version, about = "Random polymer models near a critical energy")]
pub struct Invocation {
    pub command: Command,
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Required by every stochastic command.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

/// Runs one invocation and returns the files written.
pub fn run(inv: &Invocation) -> Result<Vec<PathBuf>, CliError> {
    let loaded = config::LoadedConfig::read(&inv.config)?;
    if inv.command.is_stochastic() && inv.seed.is_none() {
        return Err(CliError::Config(format!("{} needs --seed", inv.command.name())));
    }
    std::fs::create_dir_all(&inv.out)
        .map_err(|e| CliError::Io(format!("{}: {e}", inv.out.display())))?;
    let ctx = commands::Context::new(&loaded, inv.seed.unwrap_or(0), inv.workers, &inv.out)?;
    commands::dispatch(inv.command, &ctx)
}
