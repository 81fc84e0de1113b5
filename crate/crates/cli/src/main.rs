//! `qsafe` command-line front end.
//!
//! Exit status: 0 on success, 2 on argument errors, 1 on runtime failures.
//! Machine-readable output goes to stdout, diagnostics to stderr.

mod kat;
mod mdep;
mod qeps;
mod qpp;

use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};
use qsafe::Seed;

#[derive(Parser, Debug)]
#[command(
    name = "qsafe",
    version,
    about = "Permutation-pad cipher, phase-space encryption simulator and modular Diophantine workbench",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Permutation pads, file encryption and group facts
    #[command(subcommand)]
    Qpp(qpp::QppCommand),
    /// Phase-space encryption link simulation
    #[command(subcommand)]
    Qeps(qeps::QepsCommand),
    /// Modular Diophantine primitive and its exhaustive oracles
    #[command(subcommand)]
    Mdep(mdep::MdepCommand),
    /// Known-answer vectors
    #[command(subcommand)]
    Kat(kat::KatCommand),
}

pub(crate) fn parse_seed(s: &str) -> Result<Seed, String> {
    Seed::from_hex(s).map_err(|e| e.to_string())
}

/// Reports an argument problem found after parsing and exits with status 2.
pub(crate) fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command()
        .error(clap::error::ErrorKind::ValueValidation, msg)
        .exit()
}

/// Writes `data` to `path`, or to stdout when `path` is `-`.
pub(crate) fn write_output(path: &Path, data: &[u8]) -> anyhow::Result<()> {
    if path.as_os_str() == "-" {
        let mut out = io::stdout().lock();
        out.write_all(data)?;
        out.flush()?;
    } else {
        std::fs::write(path, data)
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Qpp(cmd) => qpp::run(cmd),
        Command::Qeps(cmd) => qeps::run(cmd),
        Command::Mdep(cmd) => mdep::run(cmd),
        Command::Kat(cmd) => kat::run(cmd),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
