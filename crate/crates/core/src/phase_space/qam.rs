//! Gray-coded square QPSK and 16-QAM with unit average symbol energy.
//!
//! Codewords are read MSB first. For 16-QAM the first two bits select the
//! in-phase level and the last two the quadrature level, each through the
//! axis Gray map `00 → −3, 01 → −1, 11 → +1, 10 → +3` (scaled by `1/√10`).
//! QPSK maps each bit to `−1/√2` (0) or `+1/√2` (1).

use super::{PhaseSpaceError, Phasor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Modulation {
    Qpsk,
    Qam16,
}

impl Modulation {
    pub fn from_order(order: u32) -> Result<Self, PhaseSpaceError> {
        match order {
            4 => Ok(Modulation::Qpsk),
            16 => Ok(Modulation::Qam16),
            other => Err(PhaseSpaceError::Order(other)),
        }
    }

    pub fn order(self) -> u32 {
        match self {
            Modulation::Qpsk => 4,
            Modulation::Qam16 => 16,
        }
    }

    pub fn bits_per_symbol(self) -> usize {
        match self {
            Modulation::Qpsk => 2,
            Modulation::Qam16 => 4,
        }
    }

    /// Constellation point for `codeword` (`< order`).
    pub fn point(self, codeword: u8) -> Phasor {
        match self {
            Modulation::Qpsk => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let level = |bit: u8| if bit == 0 { -s } else { s };
                Phasor::new(level((codeword >> 1) & 1), level(codeword & 1))
            }
            Modulation::Qam16 => {
                let s = 10f64.sqrt().recip();
                let level = |pair: u8| match pair {
                    0b00 => -3.0 * s,
                    0b01 => -s,
                    0b11 => s,
                    _ => 3.0 * s,
                };
                Phasor::new(level((codeword >> 2) & 3), level(codeword & 3))
            }
        }
    }

    /// All points indexed by codeword.
    pub fn constellation(self) -> Vec<Phasor> {
        (0..self.order() as u8).map(|c| self.point(c)).collect()
    }

    /// Nearest point; ties resolve to the smaller codeword.
    pub fn decide(self, sym: Phasor) -> u8 {
        // distances within this margin count as ties
        const TIE: f64 = 1e-12;
        let mut best = 0u8;
        let mut best_d = f64::INFINITY;
        for c in 0..self.order() as u8 {
            let d = (sym - self.point(c)).norm_sqr();
            if d < best_d - TIE {
                best = c;
                best_d = d;
            }
        }
        best
    }

    pub fn codeword_bits(self, codeword: u8) -> impl Iterator<Item = u8> {
        let k = self.bits_per_symbol();
        (0..k).rev().map(move |i| (codeword >> i) & 1)
    }
}

/// Maps a 0/1 bit sequence onto constellation points.
pub fn qam_modulate(bits: &[u8], order: u32) -> Result<Vec<Phasor>, PhaseSpaceError> {
    let m = Modulation::from_order(order)?;
    let k = m.bits_per_symbol();
    if !bits.len().is_multiple_of(k) {
        return Err(PhaseSpaceError::BitAlignment {
            len: bits.len(),
            per_symbol: k,
        });
    }
    bits.chunks_exact(k)
        .map(|chunk| {
            chunk.iter().try_fold(0u8, |acc, &b| match b {
                0 | 1 => Ok((acc << 1) | b),
                _ => Err(PhaseSpaceError::InvalidBit),
            })
        })
        .map(|cw| cw.map(|cw| m.point(cw)))
        .collect()
}

/// Hard decision back to bits.
pub fn qam_demodulate(sym: Phasor, order: u32) -> Result<Vec<u8>, PhaseSpaceError> {
    let m = Modulation::from_order(order)?;
    Ok(m.codeword_bits(m.decide(sym)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_points() {
        let s10 = 10f64.sqrt();
        let s2 = 2f64.sqrt();
        let p = qam_modulate(&[0, 0, 0, 0], 16).unwrap()[0];
        assert!((p - Phasor::new(-3.0 / s10, -3.0 / s10)).norm() < 1e-15);
        let q = qam_modulate(&[0, 0], 4).unwrap()[0];
        assert!((q - Phasor::new(-1.0 / s2, -1.0 / s2)).norm() < 1e-15);
    }

    #[test]
    fn unit_average_energy() {
        for m in [Modulation::Qpsk, Modulation::Qam16] {
            let pts = m.constellation();
            let e: f64 = pts.iter().map(|p| p.norm_sqr()).sum::<f64>() / pts.len() as f64;
            assert!((e - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gray_neighbours_differ_in_one_bit() {
        let m = Modulation::Qam16;
        let step = 2.0 / 10f64.sqrt();
        for a in 0..16u8 {
            for b in 0..16u8 {
                let d = (m.point(a) - m.point(b)).norm();
                if (d - step).abs() < 1e-9 {
                    assert_eq!((a ^ b).count_ones(), 1, "{a:04b} vs {b:04b}");
                }
            }
        }
    }

    #[test]
    fn noiseless_round_trip() {
        for order in [4u32, 16] {
            let m = Modulation::from_order(order).unwrap();
            for cw in 0..order as u8 {
                let bits: Vec<u8> = m.codeword_bits(cw).collect();
                let sym = qam_modulate(&bits, order).unwrap()[0];
                assert_eq!(qam_demodulate(sym, order).unwrap(), bits);
            }
        }
    }

    #[test]
    fn midpoint_goes_to_smaller_codeword() {
        let m = Modulation::Qam16;
        // 0000 at (-3,-3) and 0001 at (-3,-1)
        let mid = (m.point(0b0000) + m.point(0b0001)) / 2.0;
        assert_eq!(m.decide(mid), 0b0000);
        // 0110 at (-1,+3) and 1110 at (+1,+3)
        let mid = (m.point(0b0110) + m.point(0b1110)) / 2.0;
        assert_eq!(m.decide(mid), 0b0110);
        assert_eq!(Modulation::Qpsk.decide(Phasor::new(0.0, 0.0)), 0);
    }

    #[test]
    fn far_point_snaps_to_corner() {
        assert_eq!(
            qam_demodulate(Phasor::new(10.0, 10.0), 16).unwrap(),
            vec![1, 0, 1, 0]
        );
    }

    #[test]
    fn input_validation() {
        assert_eq!(
            qam_modulate(&[0, 1, 0], 16),
            Err(PhaseSpaceError::BitAlignment {
                len: 3,
                per_symbol: 4
            })
        );
        assert_eq!(qam_modulate(&[0, 2], 4), Err(PhaseSpaceError::InvalidBit));
        assert_eq!(qam_modulate(&[0, 1], 8), Err(PhaseSpaceError::Order(8)));
        assert!(qam_modulate(&[], 16).unwrap().is_empty());
    }
}
