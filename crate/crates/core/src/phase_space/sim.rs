//! End-to-end link: modulate → encrypt → channel → Bob / Eve receivers.
//!
//! Frame layout: slot `j` carries a pilot when `j % pilot_period == 0` and
//! the next data symbol otherwise. Pilots are unencrypted known points drawn
//! from the `"pilot"` substream; both receivers use them for single-tap gain
//! recovery. Bob recovers the gain, then removes `k(α, φ)`. Eve taps the raw
//! received field and runs the same DSP without a key.
//!
//! Substreams: `"data"` payload codewords, `"disp"` α, `"phase"` φ,
//! `"pilot"` pilots, `"carrier"` carrier offset (when not fixed), `"noise"`.

use std::f64::consts::TAU;
use std::io::{self, Write};

use sha2::{Digest, Sha256};

use super::{
    channel_apply, dsp_phase_recover, gaussian_pair, qeps_decrypt_symbol, qeps_encrypt_symbol,
    ChannelModel, KeyElement, Modulation, PhaseSpaceError, Phasor,
};
use crate::keystream::{Keystream, RandomSource, Seed};

pub const DEFAULT_PILOT_PERIOD: usize = 64;
const PHASE_STEPS: u64 = 1 << 16;

/// How keystream output becomes `(α, φ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KeyMapping {
    /// `α = σ·(g1 + i·g2)` with `g1, g2` standard normal.
    pub sigma_alpha: f64,
    /// When set, `φ` is uniform over `2^16` steps of `[0, 2π)`; otherwise 0.
    pub randomize_phase: bool,
}

impl Default for KeyMapping {
    fn default() -> Self {
        KeyMapping {
            sigma_alpha: 2.0,
            randomize_phase: true,
        }
    }
}

impl KeyMapping {
    /// Encryption disabled: `α ≡ 0`, `φ ≡ 0`.
    pub fn identity() -> Self {
        KeyMapping {
            sigma_alpha: 0.0,
            randomize_phase: false,
        }
    }

    pub fn draw<A, P>(&self, disp: &mut A, phase: &mut P) -> KeyElement
    where
        A: RandomSource + ?Sized,
        P: RandomSource + ?Sized,
    {
        let (g1, g2) = gaussian_pair(disp);
        let alpha = Phasor::new(self.sigma_alpha * g1, self.sigma_alpha * g2);
        let phi = if self.randomize_phase {
            TAU * phase.uniform(PHASE_STEPS) as f64 / PHASE_STEPS as f64
        } else {
            0.0
        };
        KeyElement::new(alpha, phi)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationConfig {
    pub seed: Seed,
    pub order: u32,
    pub n_symbols: usize,
    pub length_km: f64,
    pub attenuation_db_per_km: f64,
    /// `None` runs a noiseless link.
    pub snr_db: Option<f64>,
    /// `None` draws a fixed offset per run from the seed.
    pub carrier_phase_offset: Option<f64>,
    pub pilot_period: usize,
    pub key_mapping: KeyMapping,
}

impl SimulationConfig {
    pub fn new(seed: Seed) -> Self {
        SimulationConfig {
            seed,
            order: 16,
            n_symbols: 100_000,
            length_km: 80.0,
            attenuation_db_per_km: 0.2,
            snr_db: Some(30.0),
            carrier_phase_offset: None,
            pilot_period: DEFAULT_PILOT_PERIOD,
            key_mapping: KeyMapping::default(),
        }
    }

    fn validate(&self) -> Result<Modulation, PhaseSpaceError> {
        let m = Modulation::from_order(self.order)?;
        if self.n_symbols == 0 {
            return Err(PhaseSpaceError::Config("n_symbols must be at least 1"));
        }
        if self.pilot_period < 2 {
            return Err(PhaseSpaceError::PilotPeriod(2));
        }
        if !(self.key_mapping.sigma_alpha.is_finite() && self.key_mapping.sigma_alpha >= 0.0) {
            return Err(PhaseSpaceError::Config(
                "sigma_alpha must be finite and >= 0",
            ));
        }
        let probe = ChannelModel {
            length_km: self.length_km,
            attenuation_db_per_km: self.attenuation_db_per_km,
            snr_db: self.snr_db,
            carrier_phase_offset: self.carrier_phase_offset.unwrap_or(0.0),
        };
        if !probe.is_valid() {
            return Err(PhaseSpaceError::Config("channel parameters out of range"));
        }
        Ok(m)
    }
}

/// Constellation snapshot points along the link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    TxClear,
    TxEncrypted,
    RxDirect,
    RxDecrypted,
    RxDirectDsp,
    RxDecryptedDsp,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::TxClear,
        Stage::TxEncrypted,
        Stage::RxDirect,
        Stage::RxDecrypted,
        Stage::RxDirectDsp,
        Stage::RxDecryptedDsp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::TxClear => "tx_clear",
            Stage::TxEncrypted => "tx_encrypted",
            Stage::RxDirect => "rx_direct",
            Stage::RxDecrypted => "rx_decrypted",
            Stage::RxDirectDsp => "rx_direct_dsp",
            Stage::RxDecryptedDsp => "rx_decrypted_dsp",
        }
    }

    fn index(self) -> usize {
        Stage::ALL.iter().position(|&s| s == self).unwrap()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationReport {
    pub modulation: Modulation,
    pub n_symbols: usize,
    pub channel: ChannelModel,
    pub ber_bob: f64,
    pub ber_eve: f64,
    pub bit_errors_bob: u64,
    pub bit_errors_eve: u64,
    pub total_bits: u64,
    /// Transmitted codeword per data symbol.
    pub tx_codewords: Vec<u8>,
    constellations: [Vec<Phasor>; 6],
}

impl SimulationReport {
    /// Data-symbol constellation at `stage` (pilots excluded).
    pub fn stage(&self, stage: Stage) -> &[Phasor] {
        &self.constellations[stage.index()]
    }

    pub fn summary_line(&self) -> String {
        format!("ber_bob={},ber_eve={}", self.ber_bob, self.ber_eve)
    }

    /// CSV with header `stage,index,i,q,tx_bits,rx_bits`; `rx_bits` is the
    /// hard decision on that stage's symbol.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "stage,index,i,q,tx_bits,rx_bits")?;
        let m = self.modulation;
        let bits = |cw: u8| -> String {
            m.codeword_bits(cw)
                .map(|b| if b == 1 { '1' } else { '0' })
                .collect()
        };
        for stage in Stage::ALL {
            for (i, (sym, &tx)) in self.stage(stage).iter().zip(&self.tx_codewords).enumerate() {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    stage.name(),
                    i,
                    sym.re,
                    sym.im,
                    bits(tx),
                    bits(m.decide(*sym))
                )?;
            }
        }
        out.flush()
    }

    /// SHA-256 over the transmitted codewords and both receivers' decisions.
    ///
    /// Only hard decisions are hashed, so the digest does not depend on the
    /// last bits of libm results.
    pub fn decision_digest(&self) -> String {
        let m = self.modulation;
        let mut h = Sha256::new();
        h.update(&self.tx_codewords);
        for stage in [Stage::RxDirectDsp, Stage::RxDecryptedDsp] {
            let decided: Vec<u8> = self.stage(stage).iter().map(|s| m.decide(*s)).collect();
            h.update(&decided);
        }
        hex::encode(h.finalize())
    }
}

fn bit_errors(m: Modulation, tx: &[u8], rx: &[Phasor]) -> u64 {
    tx.iter()
        .zip(rx)
        .map(|(&t, s)| u64::from((t ^ m.decide(*s)).count_ones()))
        .sum()
}

pub fn run_simulation(config: &SimulationConfig) -> Result<SimulationReport, PhaseSpaceError> {
    let modulation = config.validate()?;
    let seed = &config.seed;
    let mut data = Keystream::new(seed, b"data");
    let mut disp = Keystream::new(seed, b"disp");
    let mut phase = Keystream::new(seed, b"phase");
    let mut pilot = Keystream::new(seed, b"pilot");
    let mut noise = Keystream::new(seed, b"noise");

    let carrier_phase_offset = match config.carrier_phase_offset {
        Some(off) => off,
        None => TAU * Keystream::new(seed, b"carrier").unit_f64(),
    };
    let channel = ChannelModel {
        length_km: config.length_km,
        attenuation_db_per_km: config.attenuation_db_per_km,
        snr_db: config.snr_db,
        carrier_phase_offset,
    };

    let n = config.n_symbols;
    let order = u64::from(modulation.order());
    let tx_codewords: Vec<u8> = (0..n).map(|_| data.uniform(order) as u8).collect();
    let tx_clear: Vec<Phasor> = tx_codewords.iter().map(|&c| modulation.point(c)).collect();
    let keys: Vec<KeyElement> = (0..n)
        .map(|_| config.key_mapping.draw(&mut disp, &mut phase))
        .collect();
    let tx_encrypted: Vec<Phasor> = tx_clear
        .iter()
        .zip(&keys)
        .map(|(b, k)| qeps_encrypt_symbol(*b, k))
        .collect();

    // interleave pilots
    let period = config.pilot_period;
    let mut frame = Vec::with_capacity(n + n / (period - 1) + 1);
    let mut pilots = Vec::with_capacity(n / (period - 1) + 1);
    let mut data_slots = Vec::with_capacity(n);
    let mut next = tx_encrypted.iter();
    while data_slots.len() < n {
        if frame.len() % period == 0 {
            let p = modulation.point(pilot.uniform(order) as u8);
            pilots.push(p);
            frame.push(p);
        } else if let Some(&s) = next.next() {
            data_slots.push(frame.len());
            frame.push(s);
        }
    }

    let received: Vec<Phasor> = frame
        .iter()
        .map(|s| channel_apply(&mut noise, *s, &channel))
        .collect();
    let equalized = dsp_phase_recover(&received, period, &pilots)?;

    let pick = |v: &[Phasor]| -> Vec<Phasor> { data_slots.iter().map(|&j| v[j]).collect() };
    let rx_direct = pick(&received);
    let rx_direct_dsp = pick(&equalized);
    let rx_decrypted: Vec<Phasor> = rx_direct
        .iter()
        .zip(&keys)
        .map(|(y, k)| qeps_decrypt_symbol(*y, k))
        .collect();
    let rx_decrypted_dsp: Vec<Phasor> = rx_direct_dsp
        .iter()
        .zip(&keys)
        .map(|(y, k)| qeps_decrypt_symbol(*y, k))
        .collect();

    let total_bits = (n * modulation.bits_per_symbol()) as u64;
    let bit_errors_bob = bit_errors(modulation, &tx_codewords, &rx_decrypted_dsp);
    let bit_errors_eve = bit_errors(modulation, &tx_codewords, &rx_direct_dsp);

    Ok(SimulationReport {
        modulation,
        n_symbols: n,
        channel,
        ber_bob: bit_errors_bob as f64 / total_bits as f64,
        ber_eve: bit_errors_eve as f64 / total_bits as f64,
        bit_errors_bob,
        bit_errors_eve,
        total_bits,
        tx_codewords,
        constellations: [
            tx_clear,
            tx_encrypted,
            rx_direct,
            rx_decrypted,
            rx_direct_dsp,
            rx_decrypted_dsp,
        ],
    })
}
