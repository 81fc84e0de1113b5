//! Phasor-level simulation of displacement / phase-shift encryption on a
//! coherent link.
//!
//! A coherent state `|β⟩` is represented by its complex amplitude `β`.
//! Operators act as `D(α): β ↦ β + α` and `R(φ): β ↦ e^{iφ}β`; global phases
//! are dropped. The encryptor is `k(α, φ) = D(α)·R(φ)`, so the phase shift
//! acts first.

mod channel;
mod dsp;
mod qam;
mod sim;

use std::f64::consts::TAU;

use num_complex::Complex64;
use thiserror::Error;

pub use channel::{channel_apply, gaussian_pair, ChannelModel};
pub use dsp::{dsp_phase_recover, estimate_gain};
pub use qam::{qam_demodulate, qam_modulate, Modulation};
pub use sim::{
    run_simulation, KeyMapping, SimulationConfig, SimulationReport, Stage, DEFAULT_PILOT_PERIOD,
};

/// Complex field amplitude standing in for a coherent state.
pub type Phasor = Complex64;

#[derive(Debug, Error, PartialEq)]
pub enum PhaseSpaceError {
    #[error("modulation order {0} unsupported (use 4 or 16)")]
    Order(u32),
    #[error("{len} bits do not tile {per_symbol}-bit symbols")]
    BitAlignment { len: usize, per_symbol: usize },
    #[error("bit values must be 0 or 1")]
    InvalidBit,
    #[error("pilot period must be at least {0}")]
    PilotPeriod(usize),
    #[error("no usable pilots")]
    NoPilots,
    #[error("expected {expected} pilot values, got {got}")]
    PilotCount { expected: usize, got: usize },
    #[error("invalid configuration: {0}")]
    Config(&'static str),
}

/// One `(α, φ)` pair driving `k(α, φ) = D(α)·R(φ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KeyElement {
    alpha: Phasor,
    phi: f64,
}

impl KeyElement {
    /// `phi` is reduced into `[0, 2π)`.
    pub fn new(alpha: Phasor, phi: f64) -> Self {
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        KeyElement { alpha, phi }
    }

    pub fn identity() -> Self {
        KeyElement::new(Phasor::new(0.0, 0.0), 0.0)
    }

    pub fn alpha(&self) -> Phasor {
        self.alpha
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// `D(α)β = β + α`.
#[inline]
pub fn displace(beta: Phasor, alpha: Phasor) -> Phasor {
    beta + alpha
}

/// `R(φ)β = e^{iφ}β`.
#[inline]
pub fn phase_shift(beta: Phasor, phi: f64) -> Phasor {
    beta * Phasor::cis(phi)
}

/// `e^{iφ}β + α`.
#[inline]
pub fn qeps_encrypt_symbol(beta: Phasor, key: &KeyElement) -> Phasor {
    displace(phase_shift(beta, key.phi), key.alpha)
}

/// `R(−φ)·D(−α)`, the exact inverse of [`qeps_encrypt_symbol`].
#[inline]
pub fn qeps_decrypt_symbol(cipher: Phasor, key: &KeyElement) -> Phasor {
    phase_shift(displace(cipher, -key.alpha), -key.phi)
}

/// `|D(α)R(φ)β − R(φ)D(α)β|`, evaluated through both operator orderings.
pub fn commutator_gap(beta: Phasor, alpha: Phasor, phi: f64) -> f64 {
    let shift_then_displace = displace(phase_shift(beta, phi), alpha);
    let displace_then_shift = phase_shift(displace(beta, alpha), phi);
    (shift_then_displace - displace_then_shift).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Phasor {
        Phasor::new(re, im)
    }

    fn close(a: Phasor, b: Phasor) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn displacement() {
        assert_eq!(displace(c(1.0, 1.0), c(2.0, 0.0)), c(3.0, 1.0));
        assert_eq!(displace(c(0.3, -0.2), c(0.0, 0.0)), c(0.3, -0.2));
        let b = c(0.3, -0.2);
        let a = c(-1.7, 4.2);
        assert!(close(displace(displace(b, a), -a), b));
    }

    #[test]
    fn phase_shifts() {
        assert!(close(phase_shift(c(1.0, 0.0), FRAC_PI_2), c(0.0, 1.0)));
        assert_eq!(phase_shift(c(0.3, -0.2), 0.0), c(0.3, -0.2));
        let b = c(-2.5, 0.75);
        assert!((phase_shift(b, 1.234).norm() - b.norm()).abs() < 1e-12);
    }

    #[test]
    fn encrypt_decrypt_examples() {
        let key = KeyElement::new(c(1.0, 1.0), PI);
        assert!(close(qeps_encrypt_symbol(c(1.0, 0.0), &key), c(0.0, 1.0)));
        assert!(close(qeps_decrypt_symbol(c(0.0, 1.0), &key), c(1.0, 0.0)));
        assert_eq!(
            qeps_encrypt_symbol(c(0.5, 0.5), &KeyElement::identity()),
            c(0.5, 0.5)
        );
    }

    #[test]
    fn displacement_can_grow_the_amplitude() {
        let beta = c(1.0, 0.0);
        let out = qeps_encrypt_symbol(beta, &KeyElement::new(c(3.0, 0.0), 0.0));
        assert!(out.norm() > beta.norm());
        let shrunk = qeps_encrypt_symbol(beta, &KeyElement::new(c(-0.5, 0.0), 0.0));
        assert!(shrunk.norm() < beta.norm());
    }

    #[test]
    fn wrong_alpha_leaves_offset() {
        let beta = c(0.3, 0.1);
        let key = KeyElement::new(c(1.0, -1.0), 0.4);
        let wrong = KeyElement::new(c(1.0, -0.9), 0.4);
        let out = qeps_decrypt_symbol(qeps_encrypt_symbol(beta, &key), &wrong);
        assert!((out - beta).norm() > 0.05);
    }

    #[test]
    fn key_phase_normalization() {
        assert!((KeyElement::new(c(0.0, 0.0), -FRAC_PI_2).phi() - 1.5 * PI).abs() < 1e-12);
        assert!(KeyElement::new(c(0.0, 0.0), 5.0 * TAU).phi() < 1e-9);
        assert!(KeyElement::new(c(0.0, 0.0), -1e-300).phi() < TAU);
    }

    #[test]
    fn commutator_examples() {
        for beta in [c(0.0, 0.0), c(1.0, -2.0), c(-0.3, 0.7)] {
            assert!((commutator_gap(beta, c(1.0, 0.0), PI) - 2.0).abs() < 1e-12);
            assert_eq!(commutator_gap(beta, c(0.0, 0.0), 1.1), 0.0);
            assert_eq!(commutator_gap(beta, c(0.4, 2.0), 0.0), 0.0);
        }
    }
}
