//! Permutations over `{0, .., 2^n - 1}` and the Quantum Permutation Pad.
//!
//! Composition is `(p ∘ q)(v) = p(q(v))` everywhere in this module.

mod cipher;
mod group;

use thiserror::Error;

use crate::keystream::{fisher_yates, Keystream, RandomSource, Seed};

pub use cipher::{decrypt, decrypt_with, encrypt, encrypt_with, QppCipher, CIPHER_WIDTHS};
pub use group::{
    all_permutations, commuting_pairs_exhaustive, foundations_check, latin_square,
    sampled_commuting_frequency, xor_permutations_exhaustive, xor_permutations_pruned,
    FoundationsReport, InformationOperator, Mat2,
};

/// Largest supported bit width for permutation algebra.
pub const MAX_WIDTH: u8 = 16;
/// Default number of gates in a generated pad.
pub const DEFAULT_PAD_SIZE: usize = 64;
/// Domain tag for pad generation.
pub const PAD_TAG: &[u8] = b"pad";

const PAD_MAGIC: &[u8; 4] = b"QPP1";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QppError {
    #[error("bit width {0} outside 1..=16")]
    Width(u8),
    #[error("width mismatch: {left} vs {right}")]
    WidthMismatch { left: u8, right: u8 },
    #[error("map length {0} is not a power of two in 2..=65536")]
    MapLength(usize),
    #[error("map is not a bijection")]
    NotBijection,
    #[error("pad must hold between 1 and 65535 gates, got {0}")]
    PadSize(usize),
    #[error("cipher supports widths 1, 2, 4 and 8, got {0}")]
    CipherWidth(u8),
    #[error("malformed pad file: {0}")]
    PadFormat(&'static str),
    #[error("Latin square width {0} outside 1..=8")]
    LatinWidth(u8),
    #[error("width {0} too large for this enumeration")]
    EnumerationWidth(u8),
    #[error("information operator needs distinct eigenvalues")]
    DegenerateEigenvalues,
}

fn check_width(width: u8) -> Result<(), QppError> {
    if (1..=MAX_WIDTH).contains(&width) {
        Ok(())
    } else {
        Err(QppError::Width(width))
    }
}

/// A bijection on `{0, .., 2^width - 1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    width: u8,
    map: Vec<u16>,
}

impl Permutation {
    pub fn identity(width: u8) -> Result<Self, QppError> {
        check_width(width)?;
        let map = (0..1u32 << width).map(|v| v as u16).collect();
        Ok(Permutation { width, map })
    }

    pub fn from_map(width: u8, map: Vec<u16>) -> Result<Self, QppError> {
        check_width(width)?;
        if map.len() != 1usize << width {
            return Err(QppError::MapLength(map.len()));
        }
        let mut seen = vec![false; map.len()];
        for &v in &map {
            let slot = seen.get_mut(v as usize).ok_or(QppError::NotBijection)?;
            if std::mem::replace(slot, true) {
                return Err(QppError::NotBijection);
            }
        }
        Ok(Permutation { width, map })
    }

    /// Builds a permutation from an index list whose length is `2^n`.
    pub fn from_indices(indices: &[usize]) -> Result<Self, QppError> {
        let len = indices.len();
        if !len.is_power_of_two() || !(2..=1 << MAX_WIDTH).contains(&len) {
            return Err(QppError::MapLength(len));
        }
        let width = len.trailing_zeros() as u8;
        let map = indices
            .iter()
            .map(|&v| u16::try_from(v).map_err(|_| QppError::NotBijection))
            .collect::<Result<_, _>>()?;
        Self::from_map(width, map)
    }

    /// Fisher-Yates draw of a width-`width` permutation.
    pub fn random<R: RandomSource + ?Sized>(rng: &mut R, width: u8) -> Result<Self, QppError> {
        check_width(width)?;
        let map = fisher_yates(rng, 1 << width)
            .into_iter()
            .map(|v| v as u16)
            .collect();
        Ok(Permutation { width, map })
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn map(&self) -> &[u16] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, v: u16) -> u16 {
        self.map[v as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// `self ∘ other`, i.e. `other` acts first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, QppError> {
        if self.width != other.width {
            return Err(QppError::WidthMismatch {
                left: self.width,
                right: other.width,
            });
        }
        let map = other.map.iter().map(|&v| self.map[v as usize]).collect();
        Ok(Permutation {
            width: self.width,
            map,
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut map = vec![0u16; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            map[v as usize] = i as u16;
        }
        Permutation {
            width: self.width,
            map,
        }
    }

    pub fn commutes_with(&self, other: &Permutation) -> Result<bool, QppError> {
        if self.width != other.width {
            return Err(QppError::WidthMismatch {
                left: self.width,
                right: other.width,
            });
        }
        // p(q(v)) == q(p(v)) for all v, without materializing either product
        Ok(self
            .map
            .iter()
            .zip(&other.map)
            .all(|(&pv, &qv)| self.map[qv as usize] == other.map[pv as usize]))
    }

    /// The key `k` with `self(v) = v ^ k` for every `v`, if there is one.
    pub fn xor_key(&self) -> Option<u16> {
        let k = self.map[0];
        self.map
            .iter()
            .enumerate()
            .all(|(v, &out)| out == v as u16 ^ k)
            .then_some(k)
    }
}

/// Ordered list of same-width permutation gates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuantumPermutationPad {
    width: u8,
    gates: Vec<Permutation>,
}

impl QuantumPermutationPad {
    pub fn new(gates: Vec<Permutation>) -> Result<Self, QppError> {
        let width = gates.first().ok_or(QppError::PadSize(0))?.width;
        if gates.len() > u16::MAX as usize {
            return Err(QppError::PadSize(gates.len()));
        }
        if let Some(g) = gates.iter().find(|g| g.width != width) {
            return Err(QppError::WidthMismatch {
                left: width,
                right: g.width,
            });
        }
        Ok(QuantumPermutationPad { width, gates })
    }

    /// Draws `count` gates in order from the `"pad"` substream of `seed`.
    pub fn generate(seed: &Seed, width: u8, count: usize) -> Result<Self, QppError> {
        Self::generate_from(&mut Keystream::new(seed, PAD_TAG), width, count)
    }

    pub fn generate_from<R: RandomSource + ?Sized>(
        rng: &mut R,
        width: u8,
        count: usize,
    ) -> Result<Self, QppError> {
        check_width(width)?;
        if count == 0 || count > u16::MAX as usize {
            return Err(QppError::PadSize(count));
        }
        let gates = (0..count)
            .map(|_| Permutation::random(rng, width))
            .collect::<Result<_, _>>()?;
        Ok(QuantumPermutationPad { width, gates })
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn gates(&self) -> &[Permutation] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Gate-wise inverse (the transposed pad used for decryption).
    pub fn inverse(&self) -> QuantumPermutationPad {
        QuantumPermutationPad {
            width: self.width,
            gates: self.gates.iter().map(Permutation::inverse).collect(),
        }
    }

    /// Serializes as `"QPP1" | n:u8 | M:u16le | M * 2^n entries:u16le`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let entries = self.gates.len() << self.width;
        let mut out = Vec::with_capacity(7 + 2 * entries);
        out.extend_from_slice(PAD_MAGIC);
        out.push(self.width);
        out.extend_from_slice(&(self.gates.len() as u16).to_le_bytes());
        for g in &self.gates {
            for &v in &g.map {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, QppError> {
        if bytes.len() < 7 {
            return Err(QppError::PadFormat("truncated header"));
        }
        if &bytes[..4] != PAD_MAGIC {
            return Err(QppError::PadFormat("bad magic"));
        }
        let width = bytes[4];
        check_width(width)?;
        let count = u16::from_le_bytes([bytes[5], bytes[6]]) as usize;
        if count == 0 {
            return Err(QppError::PadSize(0));
        }
        let gate_len = 1usize << width;
        let body = &bytes[7..];
        if body.len() != 2 * count * gate_len {
            return Err(QppError::PadFormat("body length does not match header"));
        }
        let gates = body
            .chunks_exact(2 * gate_len)
            .map(|chunk| {
                let map = chunk
                    .chunks_exact(2)
                    .map(|b| u16::from_le_bytes([b[0], b[1]]))
                    .collect();
                Permutation::from_map(width, map)
            })
            .collect::<Result<_, _>>()?;
        Ok(QuantumPermutationPad { width, gates })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::keystream::ZeroSource;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::from_indices(v).unwrap()
    }

    #[test]
    fn rejects_non_bijections_and_bad_lengths() {
        assert_eq!(
            Permutation::from_indices(&[0, 0, 1, 2]),
            Err(QppError::NotBijection)
        );
        assert_eq!(
            Permutation::from_indices(&[0, 1, 2]),
            Err(QppError::MapLength(3))
        );
        assert_eq!(
            Permutation::from_indices(&[0, 1, 2, 7]),
            Err(QppError::NotBijection)
        );
        assert_eq!(Permutation::identity(0), Err(QppError::Width(0)));
        assert_eq!(Permutation::identity(17), Err(QppError::Width(17)));
        assert_eq!(Permutation::identity(16).unwrap().len(), 65536);
    }

    #[test]
    fn compose_examples() {
        let p = perm(&[1, 0, 3, 2]);
        let q = perm(&[0, 2, 1, 3]);
        let id = Permutation::identity(2).unwrap();
        assert_eq!(p.compose(&id).unwrap(), p);
        assert_eq!(p.compose(&q).unwrap(), perm(&[1, 3, 0, 2]));
        assert_eq!(q.compose(&p).unwrap(), perm(&[2, 0, 3, 1]));
        let wide = Permutation::identity(3).unwrap();
        assert_eq!(
            p.compose(&wide),
            Err(QppError::WidthMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn inverse_examples() {
        let id = Permutation::identity(2).unwrap();
        assert_eq!(id.inverse(), id);
        assert_eq!(perm(&[1, 0, 3, 2]).inverse(), perm(&[1, 0, 3, 2]));
        assert_eq!(perm(&[1, 2, 3, 0]).inverse(), perm(&[3, 0, 1, 2]));
    }

    #[test]
    fn commutation_examples() {
        let p = perm(&[1, 0, 3, 2]);
        assert!(p.commutes_with(&perm(&[2, 3, 0, 1])).unwrap());
        assert!(!p.commutes_with(&perm(&[0, 2, 1, 3])).unwrap());
        assert!(p.commutes_with(&Permutation::identity(2).unwrap()).unwrap());
        assert!(p.commutes_with(&Permutation::identity(1).unwrap()).is_err());
    }

    #[test]
    fn xor_key_examples() {
        assert_eq!(perm(&[2, 3, 0, 1]).xor_key(), Some(2));
        assert_eq!(Permutation::identity(4).unwrap().xor_key(), Some(0));
        assert_eq!(perm(&[0, 2, 1, 3]).xor_key(), None);
    }

    #[test]
    fn pad_from_zero_source() {
        let pad = QuantumPermutationPad::generate_from(&mut ZeroSource, 2, 1).unwrap();
        assert_eq!(pad.gates(), &[perm(&[1, 2, 3, 0])]);
        assert_eq!(pad.inverse().gates(), &[perm(&[3, 0, 1, 2])]);
    }

    #[test]
    fn pad_parameter_checks() {
        let seed = Seed::default();
        assert_eq!(
            QuantumPermutationPad::generate(&seed, 0, 4),
            Err(QppError::Width(0))
        );
        assert_eq!(
            QuantumPermutationPad::generate(&seed, 4, 0),
            Err(QppError::PadSize(0))
        );
        assert_eq!(
            QuantumPermutationPad::new(vec![]),
            Err(QppError::PadSize(0))
        );
        let mixed = vec![
            Permutation::identity(2).unwrap(),
            Permutation::identity(3).unwrap(),
        ];
        assert!(matches!(
            QuantumPermutationPad::new(mixed),
            Err(QppError::WidthMismatch { .. })
        ));
    }

    #[test]
    fn identity_pad_is_self_inverse() {
        let pad = QuantumPermutationPad::new(vec![Permutation::identity(3).unwrap(); 5]).unwrap();
        assert_eq!(pad.inverse(), pad);
    }

    #[test]
    fn pad_generation_is_deterministic_and_seed_sensitive() {
        let a = QuantumPermutationPad::generate(&Seed([1; 32]), 8, 64).unwrap();
        let b = QuantumPermutationPad::generate(&Seed([1; 32]), 8, 64).unwrap();
        let c = QuantumPermutationPad::generate(&Seed([2; 32]), 8, 64).unwrap();
        assert_eq!(a.to_bytes(), b.to_bytes());
        assert!(a.gates().iter().zip(c.gates()).any(|(x, y)| x != y));
        assert_eq!(a.inverse().inverse(), a);
    }

    #[test]
    fn pad_file_layout() {
        let pad =
            QuantumPermutationPad::new(vec![perm(&[1, 2, 3, 0]), perm(&[3, 0, 1, 2])]).unwrap();
        let bytes = pad.to_bytes();
        assert_eq!(
            bytes,
            [
                b'Q', b'P', b'P', b'1', 2, 2, 0, //
                1, 0, 2, 0, 3, 0, 0, 0, //
                3, 0, 0, 0, 1, 0, 2, 0,
            ]
        );
        assert_eq!(QuantumPermutationPad::from_bytes(&bytes).unwrap(), pad);
    }

    #[test]
    fn pad_file_rejections() {
        let good = QuantumPermutationPad::generate(&Seed::default(), 2, 3)
            .unwrap()
            .to_bytes();
        assert_eq!(
            QuantumPermutationPad::from_bytes(&good[..5]),
            Err(QppError::PadFormat("truncated header"))
        );
        let mut bad = good.clone();
        bad[0] = b'X';
        assert_eq!(
            QuantumPermutationPad::from_bytes(&bad),
            Err(QppError::PadFormat("bad magic"))
        );
        assert!(QuantumPermutationPad::from_bytes(&good[..good.len() - 1]).is_err());
        let mut dup = good.clone();
        dup[7] = dup[9];
        dup[8] = dup[10];
        assert_eq!(
            QuantumPermutationPad::from_bytes(&dup),
            Err(QppError::NotBijection)
        );
        let mut zero = good;
        zero[5] = 0;
        zero[6] = 0;
        assert_eq!(
            QuantumPermutationPad::from_bytes(&zero),
            Err(QppError::PadSize(0))
        );
    }
}
