//! Workbench for three keyed-operator constructions and their empirical checks:
//!
//! * [`qpp`]: permutation algebra, the permutation-pad cipher, the XOR Latin
//!   square and the information-operator commutator.
//! * [`phase_space`]: displacement / phase-shift encryption of QAM symbols on
//!   a simulated coherent link.
//! * [`mdep`]: the linear modular Diophantine primitive with exhaustive
//!   solution-counting oracles.
//!
//! All randomness is drawn from [`keystream::Keystream`], a domain-separated
//! ChaCha20 stream keyed by a 32-octet [`Seed`].

pub mod kat;
pub mod keystream;
pub mod mdep;
pub mod phase_space;
pub mod qpp;

pub use keystream::{fisher_yates, Keystream, RandomSource, Seed, SeedError};
