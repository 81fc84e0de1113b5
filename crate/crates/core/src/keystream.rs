//! Seeded keystream, unbiased integer sampling and keyed Fisher-Yates.
//!
//! Every random value in the crate comes from a [`Keystream`]. A stream is
//! IETF ChaCha20 (RFC 8439) keyed with the 32-octet [`Seed`], block counter
//! starting at zero, and a 96-bit nonce derived from a domain tag:
//!
//! ```text
//! nonce = SHA-256("qsafe/keystream/v1" || 0x00 || tag)[0..12]
//! ```
//!
//! Distinct tags over one seed therefore select independent ChaCha20 streams.

use std::fmt;
use std::str::FromStr;

use chacha20::cipher::{KeyIvInit, StreamCipher};
use chacha20::ChaCha20;
use sha2::{Digest, Sha256};
use thiserror::Error;

const NONCE_CONTEXT: &[u8] = b"qsafe/keystream/v1\0";
const BUFFER_LEN: usize = 4096;
const BLOCK_LEN: u64 = 64;

#[derive(Debug, Error, PartialEq)]
pub enum SeedError {
    #[error("seed must be 64 hex characters, got {0}")]
    Length(usize),
    #[error("seed is not valid hex: {0}")]
    Hex(#[from] hex::FromHexError),
}

/// A 32-octet pre-shared secret.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Seed(pub [u8; 32]);

impl Seed {
    pub const LEN: usize = 32;

    pub fn from_hex(s: &str) -> Result<Self, SeedError> {
        let s = s.trim();
        if s.len() != 2 * Self::LEN {
            return Err(SeedError::Length(s.len()));
        }
        let mut out = [0u8; 32];
        hex::decode_to_slice(s, &mut out)?;
        Ok(Seed(out))
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    /// Returns a copy with bit `bit` (0 = LSB of octet 0) inverted.
    pub fn with_bit_flipped(&self, bit: usize) -> Self {
        let mut out = *self;
        out.0[(bit / 8) % Self::LEN] ^= 1 << (bit % 8);
        out
    }
}

impl From<[u8; 32]> for Seed {
    fn from(bytes: [u8; 32]) -> Self {
        Seed(bytes)
    }
}

impl FromStr for Seed {
    type Err = SeedError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Seed::from_hex(s)
    }
}

impl fmt::Debug for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Seed({})", self.to_hex())
    }
}

/// A source of uniformly distributed octets.
///
/// The provided `uniform` is exact rejection sampling and must not be
/// overridden with anything that reduces a partial range modulo `bound`.
pub trait RandomSource {
    fn fill_bytes(&mut self, buf: &mut [u8]);

    /// Uniform integer in `[0, bound)`.
    ///
    /// Draws the fewest octets covering `bound - 1` (little-endian), masks to
    /// its bit length and retries on values `>= bound`. `bound == 1` consumes
    /// nothing.
    fn uniform(&mut self, bound: u64) -> u64 {
        assert!(bound >= 1, "uniform bound must be positive");
        if bound == 1 {
            return 0;
        }
        let top = bound - 1;
        let bits = 64 - top.leading_zeros();
        let len = bits.div_ceil(8) as usize;
        let mask = if bits == 64 {
            u64::MAX
        } else {
            (1u64 << bits) - 1
        };
        let mut raw = [0u8; 8];
        loop {
            self.fill_bytes(&mut raw[..len]);
            let v = u64::from_le_bytes(raw) & mask;
            if v < bound {
                return v;
            }
        }
    }

    /// Uniform `f64` in `[0, 1)` with 53 bits of precision.
    fn unit_f64(&mut self) -> f64 {
        self.uniform(1 << 53) as f64 / (1u64 << 53) as f64
    }
}

/// Deterministic ChaCha20 stream for one `(seed, tag)` pair.
pub struct Keystream {
    cipher: ChaCha20,
    tag: Vec<u8>,
    buf: Box<[u8; BUFFER_LEN]>,
    // next unread offset in `buf`; BUFFER_LEN means empty
    cursor: usize,
    position: u64,
}

impl Keystream {
    pub fn new(seed: &Seed, tag: &[u8]) -> Self {
        let nonce = derive_nonce(tag);
        Keystream {
            cipher: ChaCha20::new(&seed.0.into(), &nonce.into()),
            tag: tag.to_vec(),
            buf: Box::new([0u8; BUFFER_LEN]),
            cursor: BUFFER_LEN,
            position: 0,
        }
    }

    pub fn tag(&self) -> &[u8] {
        &self.tag
    }

    /// Octets delivered so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    /// Index of the 64-octet ChaCha20 block the next octet comes from.
    pub fn counter(&self) -> u64 {
        self.position / BLOCK_LEN
    }

    pub fn next_bytes(&mut self, len: usize) -> Vec<u8> {
        let mut out = vec![0u8; len];
        self.fill_bytes(&mut out);
        out
    }

    fn refill(&mut self) {
        self.buf.fill(0);
        self.cipher.apply_keystream(&mut self.buf[..]);
        self.cursor = 0;
    }
}

impl RandomSource for Keystream {
    fn fill_bytes(&mut self, mut out: &mut [u8]) {
        self.position += out.len() as u64;
        while !out.is_empty() {
            if self.cursor == BUFFER_LEN {
                self.refill();
            }
            let take = out.len().min(BUFFER_LEN - self.cursor);
            out[..take].copy_from_slice(&self.buf[self.cursor..self.cursor + take]);
            self.cursor += take;
            out = &mut out[take..];
        }
    }
}

impl fmt::Debug for Keystream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Keystream")
            .field("tag", &String::from_utf8_lossy(&self.tag))
            .field("position", &self.position)
            .finish()
    }
}

fn derive_nonce(tag: &[u8]) -> [u8; 12] {
    let digest = Sha256::new()
        .chain_update(NONCE_CONTEXT)
        .chain_update(tag)
        .finalize();
    let mut nonce = [0u8; 12];
    nonce.copy_from_slice(&digest[..12]);
    nonce
}

/// Durstenfeld shuffle of the identity on `{0, .., size - 1}`.
///
/// For `i` from `size - 1` down to 1, swaps positions `i` and
/// `rng.uniform(i + 1)`.
pub fn fisher_yates<R: RandomSource + ?Sized>(rng: &mut R, size: usize) -> Vec<usize> {
    assert!(size >= 1, "shuffle size must be positive");
    let mut map: Vec<usize> = (0..size).collect();
    for i in (1..size).rev() {
        let j = rng.uniform(i as u64 + 1) as usize;
        map.swap(i, j);
    }
    map
}

/// A source that only ever yields zero octets. Test fixture for hand traces.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroSource;

impl RandomSource for ZeroSource {
    fn fill_bytes(&mut self, buf: &mut [u8]) {
        buf.fill(0);
    }
}
