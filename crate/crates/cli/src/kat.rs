use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::anyhow;
use clap::Subcommand;
use qsafe::kat::{kat_regen, kat_run, kat_run_file, SHIPPED};

use crate::write_output;

#[derive(Subcommand, Debug)]
pub enum KatCommand {
    /// Replay a KAT file (the shipped vectors when --file is omitted)
    Run {
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Recompute the default vector set
    Regen {
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
}

pub fn run(cmd: KatCommand) -> anyhow::Result<ExitCode> {
    match cmd {
        KatCommand::Run { file } => {
            let report = match &file {
                Some(path) => kat_run_file(path)?,
                None => kat_run(SHIPPED)?,
            };
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            for f in &report.failures {
                println!(
                    "FAIL line={} kind={} expected={} actual={}",
                    f.line, f.kind, f.expected, f.actual
                );
            }
            println!(
                "vectors={},failures={},status={}",
                report.vectors,
                report.failures.len(),
                if report.passed() { "pass" } else { "fail" }
            );
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        KatCommand::Regen { out } => {
            let text = kat_regen().map_err(|e| anyhow!(e))?;
            write_output(&out, text.as_bytes())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
