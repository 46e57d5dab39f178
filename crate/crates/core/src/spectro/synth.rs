//! Seeded synthetic photon-counting spectra for validating the
//! normalization and fitting pipeline end to end.
//!
//! The underlying line model is built at the field-amplitude level: a
//! scatterer with on-resonance scattering ratio r produces a complex
//! Lorentzian response, so both derived power channels are exactly
//! Lorentzian with one common width — transmission
//! T(Δ) = 1 − ext·L(Δ) and reflection R(Δ) = refl·L(Δ), where L is the
//! unit-peak profile and the peak values ext = 1 − (1 − r/2)² and
//! refl = r²/4 are the on-resonance pair for that ratio. Detected counts
//! are Poisson draws from rate·dwell, with the reference arm measured
//! once per detuning and shared by both channels.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::focus;
use crate::spectro::{lorentzian, SpectrumPoint};

/// Ground-truth line parameters for a synthetic run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTruth {
    /// On-resonance scattering ratio; 0 ≤ r ≤ 2 so that both channel
    /// probabilities stay in [0, 1].
    pub r_sc: f64,
    /// Line center, MHz.
    pub center_mhz: f64,
    /// Full width at half maximum, MHz.
    pub fwhm_mhz: f64,
}

/// Detector rates for a synthetic run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountRates {
    /// Reference-arm count rate (counts/s); also the incident rate used
    /// to scale both signal channels.
    pub reference_hz: f64,
    /// Reflection-detector background rate (counts/s).
    pub background_hz: f64,
}

/// A generated pair of count records over one detuning grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SyntheticSpectrum {
    /// Transmission-channel points (no background column).
    pub transmission: Vec<SpectrumPoint>,
    /// Reflection-channel points carrying the background rate per point.
    pub reflection: Vec<SpectrumPoint>,
}

/// Generates Poisson count records for both channels on the given
/// detuning grid.
///
/// Identical arguments and seed give byte-identical output. Per point
/// the draw order is fixed — transmission signal, reflection signal,
/// then shared reference — and a zero-mean channel yields zero counts
/// without consuming a draw. Points follow grid order.
///
/// # Errors
///
/// [`Error::Domain`] for r outside [0, 2], non-positive width or dwell,
/// non-positive reference rate, negative background rate, a non-finite
/// grid value, or an empty grid.
pub fn generate_spectrum(
    truth: SpectrumTruth,
    rates: CountRates,
    dwell_s: f64,
    detunings_mhz: &[f64],
    seed: u64,
) -> Result<SyntheticSpectrum> {
    if !truth.r_sc.is_finite() || !(0.0..=2.0).contains(&truth.r_sc) {
        return Err(Error::Domain(format!(
            "scattering ratio must lie in [0, 2] for a physical spectrum, got {}",
            truth.r_sc
        )));
    }
    if !truth.center_mhz.is_finite() {
        return Err(Error::Domain(format!(
            "line center must be finite, got {}",
            truth.center_mhz
        )));
    }
    if !truth.fwhm_mhz.is_finite() || truth.fwhm_mhz <= 0.0 {
        return Err(Error::Domain(format!(
            "fwhm must be positive, got {} MHz",
            truth.fwhm_mhz
        )));
    }
    if !rates.reference_hz.is_finite() || rates.reference_hz <= 0.0 {
        return Err(Error::Domain(format!(
            "reference rate must be positive, got {} Hz",
            rates.reference_hz
        )));
    }
    if !rates.background_hz.is_finite() || rates.background_hz < 0.0 {
        return Err(Error::Domain(format!(
            "background rate must be nonnegative, got {} Hz",
            rates.background_hz
        )));
    }
    if !dwell_s.is_finite() || dwell_s <= 0.0 {
        return Err(Error::Domain(format!(
            "dwell must be positive, got {dwell_s} s"
        )));
    }
    if detunings_mhz.is_empty() {
        return Err(Error::Domain("detuning grid is empty".into()));
    }
    if let Some(bad) = detunings_mhz.iter().find(|d| !d.is_finite()) {
        return Err(Error::Domain(format!("non-finite detuning {bad} MHz")));
    }

    let extinction_peak = focus::extinction(truth.r_sc)?;
    let reflectivity_peak = focus::reflectivity(truth.r_sc)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut transmission = Vec::with_capacity(detunings_mhz.len());
    let mut reflection = Vec::with_capacity(detunings_mhz.len());

    for &detuning in detunings_mhz {
        let profile = lorentzian(detuning, 1.0, truth.center_mhz, truth.fwhm_mhz)?;
        let transmission_rate = rates.reference_hz * (1.0 - extinction_peak * profile);
        let reflection_rate = rates.reference_hz * reflectivity_peak * profile + rates.background_hz;

        let counts_transmission = poisson_count(&mut rng, transmission_rate * dwell_s)?;
        let counts_reflection = poisson_count(&mut rng, reflection_rate * dwell_s)?;
        let counts_reference = poisson_count(&mut rng, rates.reference_hz * dwell_s)?;

        transmission.push(SpectrumPoint {
            detuning_mhz: detuning,
            counts_signal: counts_transmission,
            counts_reference,
            dwell_s,
            background_rate_hz: None,
        });
        reflection.push(SpectrumPoint {
            detuning_mhz: detuning,
            counts_signal: counts_reflection,
            counts_reference,
            dwell_s,
            background_rate_hz: Some(rates.background_hz),
        });
    }

    Ok(SyntheticSpectrum {
        transmission,
        reflection,
    })
}

/// One Poisson draw with mean `mean`; an exactly-zero mean is the
/// deterministic zero-count outcome and consumes no randomness.
fn poisson_count(rng: &mut ChaCha8Rng, mean: f64) -> Result<u64> {
    if mean == 0.0 {
        return Ok(0);
    }
    let distribution = Poisson::new(mean).map_err(|origin| {
        Error::Domain(format!("invalid Poisson mean {mean}: {origin}"))
    })?;
    Ok(distribution.sample(rng) as u64)
}
