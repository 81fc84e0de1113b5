//! Linear modular Diophantine primitive
//!
//! ```text
//! C = p_1(x)·k_1 + p_2(x)·k_2 + … + p_m(x)·k_m  (mod p)
//! ```
//!
//! with public polynomials `p_i` of degree at most `N` over `F_p`, message
//! `x` and per-encryption noise `k`. The exhaustive oracles below count
//! solutions by brute force so that the multiplicity `p^(m−1)` and the
//! `p` vs `p^m` search costs can be checked rather than assumed.
//!
//! Moduli are capped at `2^31`, so every product of two residues fits in a
//! `u64`.

use thiserror::Error;

use crate::keystream::{Keystream, RandomSource, Seed};

pub const MAX_MODULUS: u64 = 1 << 31;
/// Largest key space the exhaustive solution counter will walk.
pub const EXHAUSTIVE_LIMIT: u64 = 100_000_000;
/// Largest modulus for candidate-plaintext enumeration.
pub const CANDIDATE_LIMIT: u64 = 1_000_000;
/// Cap on `m·(N+1)` coefficients per instance.
pub const MAX_COEFFICIENTS: usize = 1 << 24;
pub const MDEP_TAG: &[u8] = b"mdep";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MdepError {
    #[error("modulus {0} is not prime")]
    Composite(u64),
    #[error("modulus {0} exceeds 2^31")]
    ModulusTooLarge(u64),
    #[error("invalid parameters: {0}")]
    Parameters(&'static str),
    #[error("every polynomial is identically zero")]
    ZeroInstance,
    #[error("value {value} not reduced mod {p}")]
    OutOfRange { value: u64, p: u64 },
    #[error("expected {expected} noise entries, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("search space {size} exceeds limit {limit}")]
    SearchSpace { size: u128, limit: u64 },
}

/// Trial-division primality; adequate below `2^31`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn check_modulus(p: u64) -> Result<(), MdepError> {
    if p > MAX_MODULUS {
        return Err(MdepError::ModulusTooLarge(p));
    }
    if !is_prime(p) {
        return Err(MdepError::Composite(p));
    }
    Ok(())
}

fn check_residue(value: u64, p: u64) -> Result<(), MdepError> {
    if value < p {
        Ok(())
    } else {
        Err(MdepError::OutOfRange { value, p })
    }
}

/// Horner evaluation; `coeffs[j]` multiplies `x^j`.
pub fn horner(coeffs: &[u64], x: u64, p: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

fn space_size(p: u64, m: u32) -> u128 {
    (p as u128).saturating_pow(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdepInstance {
    p: u64,
    degree: usize,
    polys: Vec<Vec<u64>>,
}

impl MdepInstance {
    /// Builds an instance from explicit coefficient vectors (constant term first).
    pub fn new(p: u64, polys: Vec<Vec<u64>>) -> Result<Self, MdepError> {
        check_modulus(p)?;
        let first = polys
            .first()
            .ok_or(MdepError::Parameters("need at least one polynomial"))?;
        let len = first.len();
        if len < 2 {
            return Err(MdepError::Parameters("degree must be at least 1"));
        }
        if polys.iter().any(|c| c.len() != len) {
            return Err(MdepError::Parameters("polynomials must share one length"));
        }
        for &c in polys.iter().flatten() {
            check_residue(c, p)?;
        }
        if polys.iter().flatten().all(|&c| c == 0) {
            return Err(MdepError::ZeroInstance);
        }
        Ok(MdepInstance {
            p,
            degree: len - 1,
            polys,
        })
    }

    /// Draws `m·(N+1)` coefficients with `uniform(p)`, redrawing the whole
    /// instance in the (negligible) all-zero case.
    pub fn generate<R: RandomSource + ?Sized>(
        rng: &mut R,
        p: u64,
        m: usize,
        degree: usize,
    ) -> Result<Self, MdepError> {
        check_modulus(p)?;
        if m == 0 || degree == 0 {
            return Err(MdepError::Parameters("m and degree must be at least 1"));
        }
        let width = degree
            .checked_add(1)
            .filter(|w| w.checked_mul(m).is_some_and(|t| t <= MAX_COEFFICIENTS))
            .ok_or(MdepError::Parameters("too many coefficients"))?;
        loop {
            let polys: Vec<Vec<u64>> = (0..m)
                .map(|_| (0..width).map(|_| rng.uniform(p)).collect())
                .collect();
            if polys.iter().flatten().any(|&c| c != 0) {
                return Ok(MdepInstance { p, degree, polys });
            }
        }
    }

    /// [`generate`](Self::generate) on the `"mdep"` substream of `seed`.
    pub fn from_seed(seed: &Seed, p: u64, m: usize, degree: usize) -> Result<Self, MdepError> {
        Self::generate(&mut Keystream::new(seed, MDEP_TAG), p, m, degree)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn noise_len(&self) -> usize {
        self.polys.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn polys(&self) -> &[Vec<u64>] {
        &self.polys
    }

    /// `[p_1(x), .., p_m(x)] mod p`.
    pub fn poly_values(&self, x: u64) -> Result<Vec<u64>, MdepError> {
        check_residue(x, self.p)?;
        Ok(self.polys.iter().map(|c| horner(c, x, self.p)).collect())
    }

    /// True when every `p_i(x) ≡ 0`.
    pub fn vanishes_at(&self, x: u64) -> Result<bool, MdepError> {
        Ok(self.poly_values(x)?.iter().all(|&v| v == 0))
    }

    fn check_noise(&self, k: &NoiseVector) -> Result<(), MdepError> {
        if k.0.len() != self.polys.len() {
            return Err(MdepError::Arity {
                expected: self.polys.len(),
                got: k.0.len(),
            });
        }
        k.0.iter().try_for_each(|&v| check_residue(v, self.p))
    }

    pub fn encrypt(&self, x: u64, k: &NoiseVector) -> Result<MdepCiphertext, MdepError> {
        self.check_noise(k)?;
        let values = self.poly_values(x)?;
        Ok(MdepCiphertext(dot(&values, &k.0, self.p)))
    }

    /// Number of noise vectors with `Σ p_i(x)·k_i ≡ c`, by enumerating all `p^m`.
    pub fn solution_count(&self, x: u64, c: MdepCiphertext) -> Result<u64, MdepError> {
        check_residue(c.0, self.p)?;
        let values = self.poly_values(x)?;
        let p = self.p;
        count_solutions_by(p, self.noise_len() as u32, |k| dot(&values, k, p) == c.0)
    }

    /// Every `x` for which some noise vector produces `c`.
    ///
    /// The equation in `k` is a hyperplane that is empty only when all
    /// `p_i(x)` vanish and `c ≠ 0`, so each `x` costs one evaluation.
    pub fn candidate_plaintexts(&self, c: MdepCiphertext) -> Result<Vec<u64>, MdepError> {
        check_residue(c.0, self.p)?;
        if self.p > CANDIDATE_LIMIT {
            return Err(MdepError::SearchSpace {
                size: self.p as u128,
                limit: CANDIDATE_LIMIT,
            });
        }
        let mut out = Vec::new();
        for x in 0..self.p {
            if c.0 == 0 || !self.vanishes_at(x)? {
                out.push(x);
            }
        }
        Ok(out)
    }
}

fn dot(values: &[u64], k: &[u64], p: u64) -> u64 {
    values
        .iter()
        .zip(k)
        .fold(0, |acc, (&v, &k)| (acc + v * k) % p)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NoiseVector(pub Vec<u64>);

impl NoiseVector {
    pub fn zeros(m: usize) -> Self {
        NoiseVector(vec![0; m])
    }

    pub fn random<R: RandomSource + ?Sized>(rng: &mut R, inst: &MdepInstance) -> Self {
        NoiseVector((0..inst.noise_len()).map(|_| rng.uniform(inst.p)).collect())
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MdepCiphertext(pub u64);

/// Calls `visit` on every vector in `F_p^m` (lexicographic, last entry fastest).
fn for_each_vector(p: u64, m: u32, mut visit: impl FnMut(&[u64])) {
    let mut k = vec![0u64; m as usize];
    loop {
        visit(&k);
        let mut i = k.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            k[i] += 1;
            if k[i] < p {
                break;
            }
            k[i] = 0;
        }
    }
}

/// Counts vectors in `F_p^m` accepted by `accept`. Works for any equation
/// shape `G(x, k) = C` once `x` and `C` are fixed inside the closure.
pub fn count_solutions_by(
    p: u64,
    m: u32,
    mut accept: impl FnMut(&[u64]) -> bool,
) -> Result<u64, MdepError> {
    let size = space_size(p, m);
    if size > EXHAUSTIVE_LIMIT as u128 {
        return Err(MdepError::SearchSpace {
            size,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let mut count = 0;
    for_each_vector(p, m, |k| {
        if accept(k) {
            count += 1;
        }
    });
    Ok(count)
}

/// Every `x ∈ [0, p)` with some `k ∈ F_p^m` satisfying `eval(x, k) == c`,
/// found by joint enumeration of `p^(m+1)` pairs.
pub fn candidate_plaintexts_by(
    p: u64,
    m: u32,
    c: u64,
    mut eval: impl FnMut(u64, &[u64]) -> u64,
) -> Result<Vec<u64>, MdepError> {
    let size = space_size(p, m + 1);
    if size > EXHAUSTIVE_LIMIT as u128 {
        return Err(MdepError::SearchSpace {
            size,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let mut out = Vec::new();
    for x in 0..p {
        let mut hit = false;
        for_each_vector(p, m, |k| hit |= !hit && eval(x, k) == c);
        if hit {
            out.push(x);
        }
    }
    Ok(out)
}

/// Instrumented search costs for one `(p, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AttackCost {
    pub p: u64,
    pub m: u32,
    /// Plaintext candidates visited when guessing `x` directly.
    pub guess_ops: u64,
    /// Noise vectors visited when inverting the equation by key enumeration.
    pub algebraic_ops: u64,
    /// Guesses the ciphertext could not rule out.
    pub consistent_guesses: u64,
}

impl AttackCost {
    pub fn csv_header() -> &'static str {
        "p,m,guess_ops,algebraic_ops"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.p, self.m, self.guess_ops, self.algebraic_ops
        )
    }
}

/// Runs both exhaustive attacks on a fixed instance per row and reports the
/// visit counters. The instance uses `p_i(x) = 1 + x`, ciphertext 0 and
/// target plaintext 0; the counters do not depend on that choice.
pub fn attack_cost_table(params: &[(u64, u32)]) -> Result<Vec<AttackCost>, MdepError> {
    params
        .iter()
        .map(|&(p, m)| {
            if m == 0 {
                return Err(MdepError::Parameters("m must be at least 1"));
            }
            let inst = MdepInstance::new(p, vec![vec![1, 1 % p]; m as usize])?;
            let size = space_size(p, m);
            if size > EXHAUSTIVE_LIMIT as u128 {
                return Err(MdepError::SearchSpace {
                    size,
                    limit: EXHAUSTIVE_LIMIT,
                });
            }
            let c = MdepCiphertext(0);

            let mut guess_ops = 0u64;
            let mut consistent_guesses = 0u64;
            for x in 0..p {
                guess_ops += 1;
                // a guess is consistent iff its hyperplane is nonempty
                if c.0 == 0 || !inst.vanishes_at(x)? {
                    consistent_guesses += 1;
                }
            }

            let values = inst.poly_values(0)?;
            let mut algebraic_ops = 0u64;
            count_solutions_by(p, m, |k| {
                algebraic_ops += 1;
                dot(&values, k, p) == c.0
            })?;

            Ok(AttackCost {
                p,
                m,
                guess_ops,
                algebraic_ops,
                consistent_guesses,
            })
        })
        .collect()
}
