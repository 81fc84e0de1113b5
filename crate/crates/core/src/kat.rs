//! Known-answer vectors pinning every seeded output of the crate.
//!
//! One record per line; `#` starts a comment. Keystream records use
//!
//! ```text
//! tag:hex-seed:hex-first-64-octets
//! ```
//!
//! and the remaining kinds are prefixed with `@`:
//!
//! ```text
//! @pad:seed:n:M:sha256-of-pad-file
//! @qpp:seed:n:M:plaintext-hex:ciphertext-hex
//! @qeps:seed:order:symbols:snr-db|noiseless:decision-digest
//! @mdep:seed:p:m:degree:x:k:coeffs:c:solution-count
//! ```
//!
//! Lists (`k`, `coeffs`) are dash-separated. The trailing field is the
//! expected value (for `@mdep`, the trailing three), everything before it
//! is input.

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::keystream::{Keystream, RandomSource, Seed};
use crate::mdep::{MdepInstance, NoiseVector};
use crate::phase_space::{run_simulation, SimulationConfig};
use crate::qpp::{self, QuantumPermutationPad};

/// Vectors shipped with the crate.
pub const SHIPPED: &str = include_str!("../kat/vectors.kat");

const KEYSTREAM_KAT_LEN: usize = 64;

#[derive(Debug, Error)]
pub enum KatError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq)]
pub enum KatVector {
    Keystream {
        tag: String,
        seed: Seed,
    },
    Pad {
        seed: Seed,
        width: u8,
        gates: usize,
    },
    Qpp {
        seed: Seed,
        width: u8,
        gates: usize,
        plaintext: Vec<u8>,
    },
    Qeps {
        seed: Seed,
        order: u32,
        symbols: usize,
        snr_db: Option<f64>,
    },
    Mdep {
        seed: Seed,
        p: u64,
        m: usize,
        degree: usize,
        x: u64,
        k: Vec<u64>,
    },
}

/// A parsed record: inputs plus the pinned answer.
#[derive(Clone, Debug, PartialEq)]
pub struct KatRecord {
    pub line: usize,
    pub vector: KatVector,
    pub expected: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KatFailure {
    pub line: usize,
    pub kind: &'static str,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KatReport {
    pub vectors: usize,
    pub failures: Vec<KatFailure>,
    pub warnings: Vec<String>,
}

impl KatReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("-")
}

impl KatVector {
    pub fn kind(&self) -> &'static str {
        match self {
            KatVector::Keystream { .. } => "keystream",
            KatVector::Pad { .. } => "pad",
            KatVector::Qpp { .. } => "qpp",
            KatVector::Qeps { .. } => "qeps",
            KatVector::Mdep { .. } => "mdep",
        }
    }

    /// Computes the answer field for this vector.
    pub fn evaluate(&self) -> Result<String, String> {
        match self {
            KatVector::Keystream { tag, seed } => Ok(hex::encode(
                Keystream::new(seed, tag.as_bytes()).next_bytes(KEYSTREAM_KAT_LEN),
            )),
            KatVector::Pad { seed, width, gates } => {
                let pad = QuantumPermutationPad::generate(seed, *width, *gates)
                    .map_err(|e| e.to_string())?;
                Ok(hex::encode(Sha256::digest(pad.to_bytes())))
            }
            KatVector::Qpp {
                seed,
                width,
                gates,
                plaintext,
            } => {
                let pad = QuantumPermutationPad::generate(seed, *width, *gates)
                    .map_err(|e| e.to_string())?;
                let ct = qpp::encrypt(&pad, seed, plaintext).map_err(|e| e.to_string())?;
                Ok(hex::encode(ct))
            }
            KatVector::Qeps {
                seed,
                order,
                symbols,
                snr_db,
            } => {
                let cfg = SimulationConfig {
                    order: *order,
                    n_symbols: *symbols,
                    snr_db: *snr_db,
                    ..SimulationConfig::new(*seed)
                };
                let report = run_simulation(&cfg).map_err(|e| e.to_string())?;
                Ok(report.decision_digest())
            }
            KatVector::Mdep {
                seed,
                p,
                m,
                degree,
                x,
                k,
            } => {
                let inst =
                    MdepInstance::from_seed(seed, *p, *m, *degree).map_err(|e| e.to_string())?;
                let c = inst
                    .encrypt(*x, &NoiseVector(k.clone()))
                    .map_err(|e| e.to_string())?;
                let count = inst.solution_count(*x, c).map_err(|e| e.to_string())?;
                let coeffs: Vec<u64> = inst.polys().iter().flatten().copied().collect();
                Ok(format!("{}:{}:{}", join(&coeffs), c.0, count))
            }
        }
    }

    /// Input fields, without the answer.
    fn render_inputs(&self) -> String {
        match self {
            KatVector::Keystream { tag, seed } => format!("{tag}:{}", seed.to_hex()),
            KatVector::Pad { seed, width, gates } => {
                format!("@pad:{}:{width}:{gates}", seed.to_hex())
            }
            KatVector::Qpp {
                seed,
                width,
                gates,
                plaintext,
            } => format!(
                "@qpp:{}:{width}:{gates}:{}",
                seed.to_hex(),
                hex::encode(plaintext)
            ),
            KatVector::Qeps {
                seed,
                order,
                symbols,
                snr_db,
            } => {
                let snr = snr_db.map_or("noiseless".to_string(), |s| s.to_string());
                format!("@qeps:{}:{order}:{symbols}:{snr}", seed.to_hex())
            }
            KatVector::Mdep {
                seed,
                p,
                m,
                degree,
                x,
                k,
            } => format!("@mdep:{}:{p}:{m}:{degree}:{x}:{}", seed.to_hex(), join(k)),
        }
    }

    /// A full record line with a freshly computed answer.
    pub fn render(&self) -> Result<String, String> {
        Ok(format!("{}:{}", self.render_inputs(), self.evaluate()?))
    }
}

fn field<T: std::str::FromStr>(line: usize, name: &str, s: &str) -> Result<T, KatError> {
    s.parse().map_err(|_| KatError::Parse {
        line,
        reason: format!("bad {name} `{s}`"),
    })
}

fn seed_field(line: usize, s: &str) -> Result<Seed, KatError> {
    Seed::from_hex(s).map_err(|e| KatError::Parse {
        line,
        reason: e.to_string(),
    })
}

fn list_field(line: usize, name: &str, s: &str) -> Result<Vec<u64>, KatError> {
    s.split('-').map(|v| field(line, name, v)).collect()
}

pub fn parse_line(line: usize, text: &str) -> Result<Option<KatRecord>, KatError> {
    let text = text.trim();
    if text.is_empty() || text.starts_with('#') {
        return Ok(None);
    }
    let fields: Vec<&str> = text.split(':').collect();
    let arity = |want: usize| {
        if fields.len() == want {
            Ok(())
        } else {
            Err(KatError::Parse {
                line,
                reason: format!("expected {want} fields, found {}", fields.len()),
            })
        }
    };
    let (vector, expected) = match fields[0] {
        "@pad" => {
            arity(5)?;
            let v = KatVector::Pad {
                seed: seed_field(line, fields[1])?,
                width: field(line, "width", fields[2])?,
                gates: field(line, "gate count", fields[3])?,
            };
            (v, fields[4].to_string())
        }
        "@qpp" => {
            arity(6)?;
            let v = KatVector::Qpp {
                seed: seed_field(line, fields[1])?,
                width: field(line, "width", fields[2])?,
                gates: field(line, "gate count", fields[3])?,
                plaintext: hex::decode(fields[4]).map_err(|e| KatError::Parse {
                    line,
                    reason: format!("plaintext: {e}"),
                })?,
            };
            (v, fields[5].to_string())
        }
        "@qeps" => {
            arity(6)?;
            let snr_db = match fields[4] {
                "noiseless" => None,
                s => Some(field(line, "snr", s)?),
            };
            let v = KatVector::Qeps {
                seed: seed_field(line, fields[1])?,
                order: field(line, "order", fields[2])?,
                symbols: field(line, "symbol count", fields[3])?,
                snr_db,
            };
            (v, fields[5].to_string())
        }
        "@mdep" => {
            arity(10)?;
            let v = KatVector::Mdep {
                seed: seed_field(line, fields[1])?,
                p: field(line, "p", fields[2])?,
                m: field(line, "m", fields[3])?,
                degree: field(line, "degree", fields[4])?,
                x: field(line, "x", fields[5])?,
                k: list_field(line, "k", fields[6])?,
            };
            (v, fields[7..].join(":"))
        }
        other if other.starts_with('@') => {
            return Err(KatError::Parse {
                line,
                reason: format!("unknown record kind `{other}`"),
            })
        }
        tag => {
            arity(3)?;
            if tag.is_empty() {
                return Err(KatError::Parse {
                    line,
                    reason: "empty tag".into(),
                });
            }
            let v = KatVector::Keystream {
                tag: tag.to_string(),
                seed: seed_field(line, fields[1])?,
            };
            (v, fields[2].to_string())
        }
    };
    Ok(Some(KatRecord {
        line,
        vector,
        expected,
    }))
}

pub fn parse(text: &str) -> Result<Vec<KatRecord>, KatError> {
    text.lines()
        .enumerate()
        .filter_map(|(i, l)| parse_line(i + 1, l).transpose())
        .collect()
}

/// Replays every record in `text`.
pub fn kat_run(text: &str) -> Result<KatReport, KatError> {
    let records = parse(text)?;
    let mut report = KatReport {
        vectors: records.len(),
        ..KatReport::default()
    };
    if records.is_empty() {
        report.warnings.push("no vectors found".to_string());
    }
    for rec in &records {
        let actual = rec
            .vector
            .evaluate()
            .unwrap_or_else(|e| format!("error: {e}"));
        if !actual.eq_ignore_ascii_case(&rec.expected) {
            report.failures.push(KatFailure {
                line: rec.line,
                kind: rec.vector.kind(),
                expected: rec.expected.clone(),
                actual,
            });
        }
    }
    Ok(report)
}

pub fn kat_run_file(path: &Path) -> Result<KatReport, KatError> {
    kat_run(&std::fs::read_to_string(path)?)
}

/// The default vector set, in shipping order.
pub fn default_vectors() -> Vec<KatVector> {
    let seeds = [
        Seed([0u8; 32]),
        Seed(std::array::from_fn(|i| i as u8)),
        Seed([0xff; 32]),
    ];
    let mut out = Vec::new();
    for seed in seeds {
        for tag in ["pad", "rand", "dispatch", "disp", "phase", "data", "mdep"] {
            out.push(KatVector::Keystream {
                tag: tag.to_string(),
                seed,
            });
        }
    }
    for seed in seeds {
        out.push(KatVector::Pad {
            seed,
            width: 2,
            gates: 4,
        });
        out.push(KatVector::Pad {
            seed,
            width: 8,
            gates: 64,
        });
    }
    let plaintext = b"the quick brown fox jumps over the lazy dog".to_vec();
    for seed in seeds {
        for width in qpp::CIPHER_WIDTHS {
            out.push(KatVector::Qpp {
                seed,
                width,
                gates: 64,
                plaintext: plaintext.clone(),
            });
        }
    }
    for seed in &seeds[..2] {
        for (order, snr_db) in [(16, None), (16, Some(30.0)), (4, Some(20.0))] {
            out.push(KatVector::Qeps {
                seed: *seed,
                order,
                symbols: 2_000,
                snr_db,
            });
        }
    }
    for seed in seeds {
        for (p, m, degree) in [(5u64, 3usize, 2usize), (7, 2, 3), (101, 2, 2)] {
            let mut pick = Keystream::new(&seed, b"kat");
            let x = pick.uniform(p);
            let k = (0..m).map(|_| pick.uniform(p)).collect();
            out.push(KatVector::Mdep {
                seed,
                p,
                m,
                degree,
                x,
                k,
            });
        }
    }
    out
}

/// Renders the default vector set as a KAT file.
pub fn kat_regen() -> Result<String, String> {
    let mut text = String::from(
        "# qsafe known-answer vectors; regenerate with `qsafe kat regen`\n\
         # tag:seed:first-64-octets | @pad | @qpp | @qeps | @mdep (see kat module docs)\n",
    );
    for v in default_vectors() {
        writeln!(text, "{}", v.render()?).expect("write to String");
    }
    Ok(text)
}
