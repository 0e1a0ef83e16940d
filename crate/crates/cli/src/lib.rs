//! `grplus`: command-line front end for the positive-Grassmannian toolkit.
//!
//! Every run prints (or writes to `--out`) one JSON document
//! `{"manifest": …, "report": …}`. Exit codes: 0 when every check passes,
//! 1 when a check fails, 2 for usage, input or domain errors.

mod commands;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use grplus::exec::Execution;
use grplus::Tolerance;
use serde::Serialize;

pub use output::{Envelope, RunManifest};

/// Failures that end a run with exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] grplus::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
}

#[derive(Parser, Debug)]
#[command(
    name = "grplus",
    version,
    about = "Minor-ratio extremal problems on Gr>0(2,n)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
enum Command {
    /// Evaluate the inequality chain at one point, or over a random sweep
    Certify(commands::CertifyArgs),
    /// Minimize E with multi-restart Nelder-Mead
    Minimize(commands::MinimizeArgs),
    /// Rebuild a point of odd n from its outer-orbit minors
    Reconstruct(commands::ReconstructArgs),
    /// Compare the deformation C^q with C (n = 2 mod 4)
    Qfamily(commands::QfamilyArgs),
    /// Reduce an arbitrary matrix to a positive one with the same |minors|
    Breduce(commands::BreduceArgs),
    /// List the orbits O_k and the geometric means D_k
    Orbits(commands::OrbitsArgs),
    /// Check the Plücker, shifted and uvw identities
    Relations(commands::RelationsArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Certify(_) => "certify",
            Command::Minimize(_) => "minimize",
            Command::Reconstruct(_) => "reconstruct",
            Command::Qfamily(_) => "qfamily",
            Command::Breduce(_) => "breduce",
            Command::Orbits(_) => "orbits",
            Command::Relations(_) => "relations",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Certify(a) => &a.common,
            Command::Minimize(a) => &a.common,
            Command::Reconstruct(a) => &a.common,
            Command::Qfamily(a) => &a.common,
            Command::Breduce(a) => &a.common,
            Command::Orbits(a) => &a.common,
            Command::Relations(a) => &a.common,
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone, Serialize)]
pub(crate) struct Common {
    /// Seed for every random choice of the run
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance
    #[arg(long, default_value_t = 1e-9)]
    pub tol_rel: f64,
    /// Absolute tolerance
    #[arg(long, default_value_t = 1e-12)]
    pub tol_abs: f64,
    /// Write the JSON document here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write plot data as CSV to this path
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Run sweeps on one thread
    #[arg(long)]
    pub sequential: bool,
}

impl Common {
    pub fn tolerance(&self) -> Result<Tolerance, CliError> {
        Ok(Tolerance::new(self.tol_rel, self.tol_abs)?)
    }

    pub fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        }
    }
}

/// What a subcommand hands back: its report and whether every check held.
pub(crate) struct Outcome {
    pub report: serde_json::Value,
    pub passed: bool,
    pub csv: Option<String>,
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("grplus {}: check failed", cli.command.name());
            1
        }
        Err(e) => {
            eprintln!("grplus {}: error: {e}", cli.command.name());
            2
        }
    }
}

fn execute(cmd: &Command) -> Result<bool, CliError> {
    let start = std::time::Instant::now();
    let outcome = match cmd {
        Command::Certify(a) => commands::certify(a),
        Command::Minimize(a) => commands::minimize(a),
        Command::Reconstruct(a) => commands::reconstruct(a),
        Command::Qfamily(a) => commands::qfamily(a),
        Command::Breduce(a) => commands::breduce(a),
        Command::Orbits(a) => commands::orbits(a),
        Command::Relations(a) => commands::relations(a),
    }?;
    let common = cmd.common();
    if let (Some(path), Some(csv)) = (&common.csv, &outcome.csv) {
        output::write_atomic(path, csv.as_bytes())?;
    }
    let config = serde_json::to_value(cmd).map_err(|e| CliError::Usage(e.to_string()))?;
    let envelope = Envelope::new(
        cmd.name(),
        config,
        outcome.report,
        outcome.passed,
        start.elapsed(),
    );
    output::emit(&envelope, common.out.as_deref())?;
    Ok(outcome.passed)
}
