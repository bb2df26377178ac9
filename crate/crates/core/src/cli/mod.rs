//! Batch command line front end.
//!
//! Every command loads a subshift file (and optionally a potential file),
//! runs one computation, writes its table as CSV or JSON into the output
//! directory and prints a one-line summary. Errors are printed to stderr as
//! a single JSON line `{code, message, context}`.
//!
//! Exit codes: 0 success, 2 parse or validation error, 3 budget exceeded,
//! 4 numerical failure (non-convergence or a malformed bracket).

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

pub use commands::Outcome;
pub use config::{parse_list, Format, RunConfig};

use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "sofic-gibbs",
    version,
    about = "Gibbs measures on sofic subshifts through finite-type approximations"
)]
struct Cli {
    /// JSON file setting any of the flags below; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    flags: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Available commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Presentation, magic word, specification length and constants.
    Info,
    /// Pressure of X_m for one or several m.
    Pressure,
    /// Cylinder measures to a given depth.
    Measure,
    /// Variational and block entropy.
    Entropy,
    /// Mixing ratios |μ([a] ∩ T^{-s}[b]) / (μ[a] μ[b]) - 1|.
    Mixing,
    /// Convergence study over a range of m.
    Converge,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Info => "info",
            Command::Pressure => "pressure",
            Command::Measure => "measure",
            Command::Entropy => "entropy",
            Command::Mixing => "mixing",
            Command::Converge => "converge",
        }
    }
}

/// Runs `command` with a resolved configuration.
pub fn execute(command: Command, cfg: RunConfig) -> Result<Outcome> {
    commands::dispatch(command, cfg)
}

fn error_line(e: &Error, command: Option<Command>) -> String {
    let mut context = json!({ "command": command.map(|c| c.name()) });
    if let Error::Parse { line, column, .. } = e {
        context["line"] = json!(line);
        context["column"] = json!(column);
    }
    json!({ "code": e.code(), "message": e.to_string(), "context": context }).to_string()
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let command = cli.command;
    let cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path).map(|base| cli.flags.clone().over(base)),
        None => Ok(cli.flags.clone()),
    };
    match cfg.and_then(|cfg| execute(command, cfg)) {
        Ok(outcome) => {
            // A closed stdout (for example a pipe into `head`) is not an error.
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", outcome.summary);
            for f in &outcome.files {
                let _ = writeln!(out, "wrote {}", f.display());
            }
            if outcome.well_formed {
                0
            } else {
                eprintln!(
                    "{}",
                    json!({
                        "code": "MalformedBracket",
                        "message": "a reported bracket does not contain its value",
                        "context": { "command": command.name() },
                    })
                );
                4
            }
        }
        Err(e) => {
            eprintln!("{}", error_line(&e, Some(command)));
            e.exit_code()
        }
    }
}

/// Entry point of the binary.
pub fn main() -> i32 {
    run(std::env::args_os())
}
