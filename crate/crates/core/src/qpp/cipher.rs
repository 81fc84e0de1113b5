//! Permutation-pad cipher.
//!
//! Each octet is split into `8 / n` blocks, most significant block first.
//! For block `i`:
//!
//! ```text
//! t_i = b_i ^ r_i              r_i: bits of the "rand" substream aligned with b_i
//! g_i = uniform(M)             one draw per block from the "dispatch" substream
//! c_i = gate[g_i](t_i)
//! ```
//!
//! Decryption replays the same streams against the inverse pad. There is no
//! nonce and no authentication: reusing a seed reuses the keystream, and a
//! wrong seed yields garbage rather than an error.

use super::{QppError, QuantumPermutationPad};
use crate::keystream::{Keystream, RandomSource, Seed};

/// Block widths accepted by the cipher (octet tiling).
pub const CIPHER_WIDTHS: [u8; 4] = [1, 2, 4, 8];

pub const RAND_TAG: &[u8] = b"rand";
pub const DISPATCH_TAG: &[u8] = b"dispatch";

fn check_cipher_width(pad: &QuantumPermutationPad) -> Result<(), QppError> {
    if CIPHER_WIDTHS.contains(&pad.width()) {
        Ok(())
    } else {
        Err(QppError::CipherWidth(pad.width()))
    }
}

/// A pad together with its inverse, ready for repeated use.
#[derive(Clone, Debug)]
pub struct QppCipher {
    forward: QuantumPermutationPad,
    reverse: QuantumPermutationPad,
}

impl QppCipher {
    pub fn new(pad: QuantumPermutationPad) -> Result<Self, QppError> {
        check_cipher_width(&pad)?;
        let reverse = pad.inverse();
        Ok(QppCipher {
            forward: pad,
            reverse,
        })
    }

    pub fn pad(&self) -> &QuantumPermutationPad {
        &self.forward
    }

    pub fn encrypt(&self, seed: &Seed, plaintext: &[u8]) -> Vec<u8> {
        let (mut rand, mut dispatch) = streams(seed);
        transform(
            &self.forward,
            &mut rand,
            &mut dispatch,
            plaintext,
            Direction::Encrypt,
        )
    }

    pub fn decrypt(&self, seed: &Seed, ciphertext: &[u8]) -> Vec<u8> {
        let (mut rand, mut dispatch) = streams(seed);
        transform(
            &self.reverse,
            &mut rand,
            &mut dispatch,
            ciphertext,
            Direction::Decrypt,
        )
    }
}

fn streams(seed: &Seed) -> (Keystream, Keystream) {
    (
        Keystream::new(seed, RAND_TAG),
        Keystream::new(seed, DISPATCH_TAG),
    )
}

pub fn encrypt(
    pad: &QuantumPermutationPad,
    seed: &Seed,
    plaintext: &[u8],
) -> Result<Vec<u8>, QppError> {
    let (mut rand, mut dispatch) = streams(seed);
    encrypt_with(pad, &mut rand, &mut dispatch, plaintext)
}

pub fn decrypt(
    pad: &QuantumPermutationPad,
    seed: &Seed,
    ciphertext: &[u8],
) -> Result<Vec<u8>, QppError> {
    let (mut rand, mut dispatch) = streams(seed);
    decrypt_with(pad, &mut rand, &mut dispatch, ciphertext)
}

/// Encrypts with caller-supplied randomization and dispatch sources.
pub fn encrypt_with<R: RandomSource + ?Sized, D: RandomSource + ?Sized>(
    pad: &QuantumPermutationPad,
    rand: &mut R,
    dispatch: &mut D,
    plaintext: &[u8],
) -> Result<Vec<u8>, QppError> {
    check_cipher_width(pad)?;
    Ok(transform(
        pad,
        rand,
        dispatch,
        plaintext,
        Direction::Encrypt,
    ))
}

/// Decrypts with caller-supplied sources; `pad` is the forward pad.
pub fn decrypt_with<R: RandomSource + ?Sized, D: RandomSource + ?Sized>(
    pad: &QuantumPermutationPad,
    rand: &mut R,
    dispatch: &mut D,
    ciphertext: &[u8],
) -> Result<Vec<u8>, QppError> {
    check_cipher_width(pad)?;
    Ok(transform(
        &pad.inverse(),
        rand,
        dispatch,
        ciphertext,
        Direction::Decrypt,
    ))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Encrypt,
    Decrypt,
}

// `gates` is the forward pad when encrypting and the inverse pad when decrypting.
fn transform<R: RandomSource + ?Sized, D: RandomSource + ?Sized>(
    gates: &QuantumPermutationPad,
    rand: &mut R,
    dispatch: &mut D,
    input: &[u8],
    dir: Direction,
) -> Vec<u8> {
    let width = gates.width() as u32;
    let mask = ((1u16 << width) - 1) as u8;
    let count = gates.len() as u64;
    let gates = gates.gates();

    let mut whitening = vec![0u8; input.len()];
    rand.fill_bytes(&mut whitening);

    input
        .iter()
        .zip(&whitening)
        .map(|(&octet, &r)| {
            let src = if dir == Direction::Encrypt {
                octet ^ r
            } else {
                octet
            };
            let mut out = 0u8;
            let mut shift = 8;
            while shift > 0 {
                shift -= width;
                let block = (src >> shift) & mask;
                let g = dispatch.uniform(count) as usize;
                out |= (gates[g].apply(block as u16) as u8) << shift;
            }
            if dir == Direction::Decrypt {
                out ^ r
            } else {
                out
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::keystream::ZeroSource;
    use crate::qpp::Permutation;

    fn hand_pad() -> QuantumPermutationPad {
        QuantumPermutationPad::new(vec![Permutation::from_indices(&[1, 2, 3, 0]).unwrap()]).unwrap()
    }

    #[test]
    fn hand_trace_width_two() {
        let pad = hand_pad();
        let ct = encrypt_with(&pad, &mut ZeroSource, &mut ZeroSource, &[0b0001_1011]).unwrap();
        assert_eq!(ct, vec![0b0110_1100]);
        let pt = decrypt_with(&pad, &mut ZeroSource, &mut ZeroSource, &ct).unwrap();
        assert_eq!(pt, vec![0b0001_1011]);
    }

    #[test]
    fn empty_input() {
        let pad = QuantumPermutationPad::generate(&Seed::default(), 8, 4).unwrap();
        assert!(encrypt(&pad, &Seed::default(), &[]).unwrap().is_empty());
        assert!(decrypt(&pad, &Seed::default(), &[]).unwrap().is_empty());
    }

    #[test]
    fn unsupported_widths() {
        for w in [3u8, 5, 16] {
            let pad = QuantumPermutationPad::generate(&Seed::default(), w, 1).unwrap();
            assert_eq!(
                encrypt(&pad, &Seed::default(), b"x"),
                Err(QppError::CipherWidth(w))
            );
            assert!(QppCipher::new(pad).is_err());
        }
    }

    #[test]
    fn round_trip_each_width() {
        let seed = Seed([7; 32]);
        let msg: Vec<u8> = (0..=255u8).cycle().take(1000).collect();
        for w in CIPHER_WIDTHS {
            let pad = QuantumPermutationPad::generate(&seed, w, 64).unwrap();
            let ct = encrypt(&pad, &seed, &msg).unwrap();
            assert_eq!(ct.len(), msg.len());
            assert_ne!(ct, msg);
            assert_eq!(decrypt(&pad, &seed, &ct).unwrap(), msg);
            let cipher = QppCipher::new(pad).unwrap();
            assert_eq!(cipher.encrypt(&seed, &msg), ct);
            assert_eq!(cipher.decrypt(&seed, &ct), msg);
        }
    }

    #[test]
    fn wrong_seed_garbles() {
        let seed = Seed([7; 32]);
        let other = seed.with_bit_flipped(0);
        let pad = QuantumPermutationPad::generate(&seed, 8, 64).unwrap();
        let msg = vec![0x55u8; 256];
        let ct = encrypt(&pad, &seed, &msg).unwrap();
        let garbled = decrypt(&pad, &other, &ct).unwrap();
        assert_eq!(garbled.len(), msg.len());
        assert_ne!(garbled, msg);
    }
}
