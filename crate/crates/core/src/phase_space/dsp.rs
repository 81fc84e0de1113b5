use super::{PhaseSpaceError, Phasor};

/// Least-squares single-tap gain `Σ y·t* / Σ |t|²` over the pilot slots
/// `0, P, 2P, ..`.
pub fn estimate_gain(
    symbols: &[Phasor],
    pilot_period: usize,
    pilot_truth: &[Phasor],
) -> Result<Phasor, PhaseSpaceError> {
    if pilot_period == 0 {
        return Err(PhaseSpaceError::PilotPeriod(1));
    }
    let expected = symbols.len().div_ceil(pilot_period);
    if expected == 0 || pilot_truth.is_empty() {
        return Err(PhaseSpaceError::NoPilots);
    }
    if pilot_truth.len() != expected {
        return Err(PhaseSpaceError::PilotCount {
            expected,
            got: pilot_truth.len(),
        });
    }
    let (num, den) = symbols
        .iter()
        .step_by(pilot_period)
        .zip(pilot_truth)
        .fold((Phasor::new(0.0, 0.0), 0.0), |(num, den), (y, t)| {
            (num + y * t.conj(), den + t.norm_sqr())
        });
    if den == 0.0 || num.norm() == 0.0 || !num.is_finite() {
        return Err(PhaseSpaceError::NoPilots);
    }
    Ok(num / den)
}

/// Divides the pilot-estimated complex gain out of every symbol.
pub fn dsp_phase_recover(
    symbols: &[Phasor],
    pilot_period: usize,
    pilot_truth: &[Phasor],
) -> Result<Vec<Phasor>, PhaseSpaceError> {
    let gain = estimate_gain(symbols, pilot_period, pilot_truth)?;
    Ok(symbols.iter().map(|s| s / gain).collect())
}
