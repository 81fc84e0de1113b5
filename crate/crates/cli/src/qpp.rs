use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Subcommand;
use qsafe::qpp::{
    self, commuting_pairs_exhaustive, foundations_check, latin_square, sampled_commuting_frequency,
    InformationOperator, QuantumPermutationPad, DEFAULT_PAD_SIZE,
};
use qsafe::{Keystream, Seed};

use crate::{parse_seed, usage_error, write_output};

#[derive(Subcommand, Debug)]
pub enum QppCommand {
    /// Generate a pad file from a seed
    Keygen {
        #[arg(long, value_parser = parse_seed)]
        seed: Seed,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u8).range(1..=16))]
        n: u8,
        #[arg(long, default_value_t = DEFAULT_PAD_SIZE as u16, value_parser = clap::value_parser!(u16).range(1..))]
        gates: u16,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encrypt a file
    Encrypt(CipherArgs),
    /// Decrypt a file
    Decrypt(CipherArgs),
    /// Print the XOR Latin square, one row per line
    LatinSquare {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=8))]
        n: u8,
    },
    /// Commutator of the information operator with XOR, and the Hadamard eigenbasis check
    Foundations {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        i1: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        i2: f64,
    },
    /// Fraction of commuting gate pairs (exhaustive for n <= 2, sampled otherwise)
    CommuteStats {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=16))]
        n: u8,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, value_parser = parse_seed)]
        seed: Option<Seed>,
    },
}

#[derive(clap::Args, Debug)]
pub struct CipherArgs {
    #[arg(long)]
    pad: PathBuf,
    #[arg(long, value_parser = parse_seed)]
    seed: Seed,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn load_pad(path: &PathBuf) -> anyhow::Result<QuantumPermutationPad> {
    let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    QuantumPermutationPad::from_bytes(&bytes).with_context(|| format!("{}", path.display()))
}

pub fn run(cmd: QppCommand) -> anyhow::Result<ExitCode> {
    match cmd {
        QppCommand::Keygen {
            seed,
            n,
            gates,
            out,
        } => {
            let pad = QuantumPermutationPad::generate(&seed, n, gates as usize)?;
            write_output(&out, &pad.to_bytes())?;
            eprintln!("wrote pad n={n} gates={gates}");
        }
        QppCommand::Encrypt(args) => {
            let pad = load_pad(&args.pad)?;
            let data = std::fs::read(&args.input)
                .with_context(|| format!("cannot read {}", args.input.display()))?;
            write_output(&args.out, &qpp::encrypt(&pad, &args.seed, &data)?)?;
        }
        QppCommand::Decrypt(args) => {
            let pad = load_pad(&args.pad)?;
            let data = std::fs::read(&args.input)
                .with_context(|| format!("cannot read {}", args.input.display()))?;
            write_output(&args.out, &qpp::decrypt(&pad, &args.seed, &data)?)?;
        }
        QppCommand::LatinSquare { n } => {
            for row in latin_square(n)? {
                let cells: Vec<String> = row.iter().map(u16::to_string).collect();
                println!("{}", cells.join(" "));
            }
        }
        QppCommand::Foundations { i1, i2 } => {
            let op = InformationOperator::new(i1, i2)
                .unwrap_or_else(|e| usage_error(format!("--i1/--i2: {e}")));
            let report = foundations_check(&op);
            let m = report.commutator.0;
            println!(
                "commutator=[[{},{}],[{},{}]]",
                m[0][0], m[0][1], m[1][0], m[1][1]
            );
            println!("max_abs={}", report.commutator.max_abs());
            println!(
                "hadamard_diagonalizes_xor={}",
                report.hadamard_diagonalizes_xor
            );
        }
        QppCommand::CommuteStats { n, samples, seed } => {
            if n <= 2 {
                let (commuting, total) = commuting_pairs_exhaustive(n)?;
                println!(
                    "mode=exhaustive,n={n},commuting={commuting},total={total},fraction={}",
                    commuting as f64 / total as f64
                );
            } else {
                let seed = seed.unwrap_or_else(|| usage_error("--seed is required when n > 2"));
                let mut ks = Keystream::new(&seed, b"commute");
                let f = sampled_commuting_frequency(&mut ks, n, samples as usize)?;
                println!("mode=sampled,n={n},samples={samples},fraction={f}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
