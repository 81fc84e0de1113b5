use std::f64::consts::TAU;

use super::Phasor;
use crate::keystream::RandomSource;

/// Fiber span followed by an amplified coherent receiver.
///
/// Noise is referenced to the received (attenuated) unit-energy signal, so
/// `snr_db` is the SNR a unit-energy symbol sees at the receiver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelModel {
    pub length_km: f64,
    pub attenuation_db_per_km: f64,
    /// `None` disables noise.
    pub snr_db: Option<f64>,
    pub carrier_phase_offset: f64,
}

impl ChannelModel {
    pub fn identity() -> Self {
        ChannelModel {
            length_km: 0.0,
            attenuation_db_per_km: 0.0,
            snr_db: None,
            carrier_phase_offset: 0.0,
        }
    }

    /// Field amplitude factor `10^(−L·a/20)`.
    pub fn amplitude(&self) -> f64 {
        10f64.powf(-self.length_km * self.attenuation_db_per_km / 20.0)
    }

    /// Per-component noise standard deviation.
    pub fn noise_sigma(&self) -> Option<f64> {
        self.snr_db
            .map(|snr| self.amplitude() * (10f64.powf(-snr / 10.0) / 2.0).sqrt())
    }

    pub fn is_valid(&self) -> bool {
        self.length_km >= 0.0
            && self.attenuation_db_per_km >= 0.0
            && self.length_km.is_finite()
            && self.attenuation_db_per_km.is_finite()
            && self.carrier_phase_offset.is_finite()
            && self.snr_db.is_none_or(f64::is_finite)
    }
}

/// Two independent standard normals (Box–Muller).
pub fn gaussian_pair<R: RandomSource + ?Sized>(rng: &mut R) -> (f64, f64) {
    // u1 in (0, 1] keeps the logarithm finite
    let u1 = 1.0 - rng.unit_f64();
    let u2 = rng.unit_f64();
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (TAU * u2).sin_cos();
    (r * c, r * s)
}

/// Attenuation, static carrier rotation, then circular Gaussian noise.
pub fn channel_apply<R: RandomSource + ?Sized>(
    rng: &mut R,
    sym: Phasor,
    ch: &ChannelModel,
) -> Phasor {
    let faded = sym * ch.amplitude() * Phasor::cis(ch.carrier_phase_offset);
    match ch.noise_sigma() {
        Some(sigma) => {
            let (g1, g2) = gaussian_pair(rng);
            faded + Phasor::new(sigma * g1, sigma * g2)
        }
        None => faded,
    }
}
