use std::path::PathBuf;
use std::process::ExitCode;

use clap::Subcommand;
use qsafe::phase_space::{run_simulation, KeyMapping, SimulationConfig, DEFAULT_PILOT_PERIOD};
use qsafe::Seed;

use crate::{parse_seed, write_output};

#[derive(Subcommand, Debug)]
pub enum QepsCommand {
    /// Run the link and write the six-stage constellation CSV
    Simulate {
        #[arg(long, value_parser = parse_seed)]
        seed: Seed,
        #[arg(long, default_value_t = 16, value_parser = parse_order)]
        order: u32,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..=50_000_000))]
        symbols: u64,
        #[arg(long = "length-km", default_value_t = 80.0, value_parser = non_negative)]
        length_km: f64,
        #[arg(long, default_value_t = 0.2, value_parser = non_negative)]
        attenuation: f64,
        /// SNR in dB at the receiver, or `noiseless`
        #[arg(long, default_value = "30", value_parser = parse_snr, allow_hyphen_values = true)]
        snr: Snr,
        /// Carrier offset in radians; drawn from the seed when omitted
        #[arg(long = "carrier-offset", allow_hyphen_values = true, value_parser = finite)]
        carrier_offset: Option<f64>,
        #[arg(long = "pilot-period", default_value_t = DEFAULT_PILOT_PERIOD as u64, value_parser = clap::value_parser!(u64).range(2..))]
        pilot_period: u64,
        /// Displacement scale; 0 together with --no-phase disables encryption
        #[arg(long = "sigma-alpha", default_value_t = 2.0, value_parser = non_negative)]
        sigma_alpha: f64,
        #[arg(long = "no-phase")]
        no_phase: bool,
        /// CSV destination (`-` for stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug)]
pub struct Snr(Option<f64>);

fn parse_snr(s: &str) -> Result<Snr, String> {
    if s == "noiseless" {
        return Ok(Snr(None));
    }
    finite(s).map(|v| Snr(Some(v)))
}

fn parse_order(s: &str) -> Result<u32, String> {
    match s {
        "4" => Ok(4),
        "16" => Ok(16),
        _ => Err("order must be 4 or 16".into()),
    }
}

fn finite(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a finite number")),
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    finite(s).and_then(|v| {
        if v >= 0.0 {
            Ok(v)
        } else {
            Err("value must be non-negative".into())
        }
    })
}

pub fn run(cmd: QepsCommand) -> anyhow::Result<ExitCode> {
    let QepsCommand::Simulate {
        seed,
        order,
        symbols,
        length_km,
        attenuation,
        snr,
        carrier_offset,
        pilot_period,
        sigma_alpha,
        no_phase,
        out,
    } = cmd;
    let config = SimulationConfig {
        seed,
        order,
        n_symbols: symbols as usize,
        length_km,
        attenuation_db_per_km: attenuation,
        snr_db: snr.0,
        carrier_phase_offset: carrier_offset,
        pilot_period: pilot_period as usize,
        key_mapping: KeyMapping {
            sigma_alpha,
            randomize_phase: !no_phase,
        },
    };
    let report = run_simulation(&config)?;
    if let Some(path) = out {
        let mut csv = Vec::new();
        report.write_csv(&mut csv)?;
        write_output(&path, &csv)?;
    }
    println!("{}", report.summary_line());
    Ok(ExitCode::SUCCESS)
}
