use std::path::PathBuf;
use std::process::ExitCode;

use clap::Subcommand;
use qsafe::mdep::{
    attack_cost_table, is_prime, AttackCost, MdepInstance, NoiseVector, MAX_MODULUS,
};
use qsafe::{Keystream, RandomSource, Seed};

use crate::{parse_seed, usage_error, write_output};

#[derive(Subcommand, Debug)]
pub enum MdepCommand {
    /// Print an instance, one encryption, its solution count and candidate set size
    Demo {
        #[arg(long, value_parser = parse_seed)]
        seed: Seed,
        #[arg(long, default_value_t = 5, value_parser = parse_prime)]
        p: u64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=64))]
        m: u32,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=4096))]
        degree: u32,
    },
    /// Instrumented guess vs key-enumeration costs
    CostTable {
        /// Comma-separated `p:m` pairs
        #[arg(long, default_value = "2:1,3:2,5:3", value_parser = parse_pairs)]
        pairs: Pairs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the p^(m-1) solution multiplicity on random instances
    Multiplicity {
        #[arg(long, value_parser = parse_seed)]
        seed: Seed,
        #[arg(long, default_value_t = 5, value_parser = parse_prime)]
        p: u64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=64))]
        m: u32,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=4096))]
        degree: u32,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
        instances: u32,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
        trials: u32,
    },
}

#[derive(Clone, Debug)]
pub struct Pairs(Vec<(u64, u32)>);

fn parse_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    if p > MAX_MODULUS {
        return Err("p must not exceed 2^31".into());
    }
    if !is_prime(p) {
        return Err(format!("{p} is not prime"));
    }
    Ok(p)
}

fn parse_pairs(s: &str) -> Result<Pairs, String> {
    s.split(',')
        .map(|pair| {
            let (p, m) = pair
                .split_once(':')
                .ok_or_else(|| format!("`{pair}` is not p:m"))?;
            let p = parse_prime(p.trim())?;
            let m: u32 = m
                .trim()
                .parse()
                .ok()
                .filter(|&m| m >= 1)
                .ok_or_else(|| format!("bad m in `{pair}`"))?;
            Ok((p, m))
        })
        .collect::<Result<_, _>>()
        .map(Pairs)
}

fn check_space(p: u64, m: u32) {
    if (p as f64).powi(m as i32) > qsafe::mdep::EXHAUSTIVE_LIMIT as f64 {
        usage_error(format!("p^m = {p}^{m} exceeds the exhaustive limit 10^8"));
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join("-")
}

pub fn run(cmd: MdepCommand) -> anyhow::Result<ExitCode> {
    match cmd {
        MdepCommand::Demo { seed, p, m, degree } => {
            check_space(p, m);
            let inst = MdepInstance::from_seed(&seed, p, m as usize, degree as usize)?;
            let mut pick = Keystream::new(&seed, b"demo");
            let x = pick.uniform(p);
            let k = NoiseVector::random(&mut pick, &inst);
            let c = inst.encrypt(x, &k)?;
            println!("p={p}");
            println!("m={m}");
            println!("degree={degree}");
            for (i, poly) in inst.polys().iter().enumerate() {
                println!("poly_{}={}", i + 1, join(poly));
            }
            println!("x={x}");
            println!("k={}", join(k.entries()));
            println!("c={}", c.0);
            println!("vanishes_at_x={}", inst.vanishes_at(x)?);
            println!("solution_count={}", inst.solution_count(x, c)?);
            println!("expected_multiplicity={}", p.pow(m - 1));
            if p <= qsafe::mdep::CANDIDATE_LIMIT {
                println!(
                    "candidate_plaintexts={}",
                    inst.candidate_plaintexts(c)?.len()
                );
            }
        }
        MdepCommand::CostTable { pairs, out } => {
            for &(p, m) in &pairs.0 {
                check_space(p, m);
            }
            let rows = attack_cost_table(&pairs.0)?;
            let mut csv = String::from(AttackCost::csv_header());
            csv.push('\n');
            for r in &rows {
                csv.push_str(&r.csv_row());
                csv.push('\n');
            }
            match out {
                Some(path) => write_output(&path, csv.as_bytes())?,
                None => print!("{csv}"),
            }
        }
        MdepCommand::Multiplicity {
            seed,
            p,
            m,
            degree,
            instances,
            trials,
        } => {
            check_space(p, m);
            let expected = p.pow(m - 1);
            let mut rng = Keystream::new(&seed, b"multiplicity");
            let (mut checked, mut matched, mut degenerate) = (0u64, 0u64, 0u64);
            for _ in 0..instances {
                let inst = MdepInstance::generate(&mut rng, p, m as usize, degree as usize)?;
                for _ in 0..trials {
                    let x = rng.uniform(p);
                    let k = NoiseVector::random(&mut rng, &inst);
                    if inst.vanishes_at(x)? {
                        degenerate += 1;
                        continue;
                    }
                    let c = inst.encrypt(x, &k)?;
                    checked += 1;
                    if inst.solution_count(x, c)? == expected {
                        matched += 1;
                    }
                }
            }
            let holds = checked == matched;
            println!(
                "p={p},m={m},expected={expected},checked={checked},matched={matched},degenerate_skipped={degenerate},law_holds={holds}"
            );
            if !holds {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
