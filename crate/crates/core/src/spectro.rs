//! Photon-counting spectroscopy: normalization of raw count records to
//! transmission/reflection with Poisson error propagation, Lorentzian
//! line-profile fitting, and a seeded synthetic-data generator for
//! validation.
//!
//! A measurement run is a list of [`SpectrumPoint`]s: per detuning, the
//! signal counts, the reference counts taken without the atom, the dwell
//! time, and (for the reflection channel) an optional per-point
//! background rate. Dwell is treated entirely as live time.

pub mod fit;
pub mod synth;

pub use fit::{fit_lorentzian, LorentzFit};
pub use synth::{generate_spectrum, CountRates, SpectrumTruth, SyntheticSpectrum};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::focus;

/// One detuning point of a photon-counting spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    /// Detuning from the unperturbed atomic transition, MHz.
    pub detuning_mhz: f64,
    /// Counts in the signal detector during `dwell_s`.
    pub counts_signal: u64,
    /// Counts in the reference measurement (no atom) during `dwell_s`.
    pub counts_reference: u64,
    /// Dwell (live) time, s.
    pub dwell_s: f64,
    /// Detector background rate, counts/s (reflection channel); a
    /// per-point value overrides any run-level rate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub background_rate_hz: Option<f64>,
}

/// A normalized spectrum point with its propagated standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedPoint {
    /// Detuning, MHz.
    pub detuning_mhz: f64,
    /// Normalized transmission or reflection.
    pub value: f64,
    /// Propagated Poisson standard deviation.
    pub sigma: f64,
    /// True when zero signal counts forced the one-count, one-sided
    /// error scale instead of the two-sided propagation.
    pub one_sided: bool,
}

/// Normalizes signal counts to transmission T = N_sig/N_ref per point
/// (each point's two counts share its dwell, so dwell cancels), with
/// σ_T = T √(1/N_sig + 1/N_ref).
///
/// Points with zero signal counts yield T = 0 with the one-sided scale
/// σ_T = 1/N_ref and the `one_sided` flag set.
///
/// # Errors
///
/// [`Error::DegenerateData`] when any reference count is zero;
/// [`Error::Domain`] for non-positive dwell.
pub fn normalize_transmission(points: &[SpectrumPoint]) -> Result<Vec<NormalizedPoint>> {
    points
        .iter()
        .map(|point| {
            let (n_sig, n_ref) = validated_counts(point)?;
            if n_sig == 0.0 {
                return Ok(NormalizedPoint {
                    detuning_mhz: point.detuning_mhz,
                    value: 0.0,
                    sigma: 1.0 / n_ref,
                    one_sided: true,
                });
            }
            let value = n_sig / n_ref;
            Ok(NormalizedPoint {
                detuning_mhz: point.detuning_mhz,
                value,
                sigma: value * (1.0 / n_sig + 1.0 / n_ref).sqrt(),
                one_sided: false,
            })
        })
        .collect()
}

/// Normalizes signal counts to reflection
/// R = (N_sig − background·dwell) / N_ref with
/// σ_R² = (N_sig + background·dwell)/N_ref² + R²/N_ref, covering the
/// Poisson variance of both raw counts, the background model, and the
/// reference normalization.
///
/// A per-point `background_rate_hz` overrides `background_rate_hz` given
/// here. Negative background-subtracted values are kept so fits stay
/// unbiased; zero-signal points keep at least the one-count scale
/// 1/N_ref (one-sided flag), which matters only for pathological
/// zero-background data.
///
/// # Errors
///
/// [`Error::DegenerateData`] when any reference count is zero;
/// [`Error::Domain`] for negative background rate or non-positive dwell.
pub fn normalize_reflection(
    points: &[SpectrumPoint],
    background_rate_hz: f64,
) -> Result<Vec<NormalizedPoint>> {
    if !background_rate_hz.is_finite() || background_rate_hz < 0.0 {
        return Err(Error::Domain(format!(
            "background rate must be nonnegative, got {background_rate_hz} Hz"
        )));
    }
    points
        .iter()
        .map(|point| {
            let (n_sig, n_ref) = validated_counts(point)?;
            let rate = point.background_rate_hz.unwrap_or(background_rate_hz);
            if !rate.is_finite() || rate < 0.0 {
                return Err(Error::Domain(format!(
                    "background rate must be nonnegative, got {rate} Hz at detuning {} MHz",
                    point.detuning_mhz
                )));
            }
            let background = rate * point.dwell_s;
            let value = (n_sig - background) / n_ref;
            let variance = (n_sig + background) / (n_ref * n_ref) + value * value / n_ref;
            let one_sided = n_sig == 0.0;
            let sigma = if one_sided {
                variance.sqrt().max(1.0 / n_ref)
            } else {
                variance.sqrt()
            };
            Ok(NormalizedPoint {
                detuning_mhz: point.detuning_mhz,
                value,
                sigma,
                one_sided,
            })
        })
        .collect()
}

fn validated_counts(point: &SpectrumPoint) -> Result<(f64, f64)> {
    if !point.dwell_s.is_finite() || point.dwell_s <= 0.0 {
        return Err(Error::Domain(format!(
            "dwell must be positive, got {} s at detuning {} MHz",
            point.dwell_s, point.detuning_mhz
        )));
    }
    if point.counts_reference == 0 {
        return Err(Error::DegenerateData(format!(
            "zero reference counts at detuning {} MHz",
            point.detuning_mhz
        )));
    }
    Ok((point.counts_signal as f64, point.counts_reference as f64))
}

/// Unit-height-scaled Lorentzian line profile
/// A (δf/2)² / ((Δ − Δf₀)² + (δf/2)²).
///
/// # Errors
///
/// [`Error::Domain`] for fwhm ≤ 0.
pub fn lorentzian(delta_mhz: f64, amplitude: f64, center_mhz: f64, fwhm_mhz: f64) -> Result<f64> {
    if !fwhm_mhz.is_finite() || fwhm_mhz <= 0.0 {
        return Err(Error::Domain(format!(
            "fwhm must be positive, got {fwhm_mhz} MHz"
        )));
    }
    let half_width = fwhm_mhz / 2.0;
    let offset = delta_mhz - center_mhz;
    Ok(amplitude * half_width * half_width / (offset * offset + half_width * half_width))
}

/// A scattering ratio inferred from a fitted line amplitude, with the
/// propagated fit uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioEstimate {
    /// Inferred scattering ratio.
    pub r_sc: f64,
    /// Propagated standard deviation.
    pub sigma: f64,
}

/// Infers the scattering ratio from a transmission fit: the dip amplitude
/// is −A = peak extinction, inverted through r = 2(1 − √(1 − ext)), with
/// σ_r = σ_A / √(1 − ext).
///
/// # Errors
///
/// [`Error::Domain`] when the fitted amplitude is not a dip in (−1, 0).
pub fn ratio_from_transmission_fit(fit: &LorentzFit) -> Result<RatioEstimate> {
    let extinction = -fit.amplitude;
    if !(0.0..1.0).contains(&extinction) || extinction == 0.0 {
        return Err(Error::Domain(format!(
            "transmission fit amplitude {} is not a dip in (-1, 0)",
            fit.amplitude
        )));
    }
    let r_sc = focus::ratio_from_extinction(extinction)?;
    Ok(RatioEstimate {
        r_sc,
        sigma: fit.sigma_amplitude / (1.0 - extinction).sqrt(),
    })
}

/// Infers the scattering ratio from a reflection fit: the peak amplitude
/// is the peak reflectivity, inverted through r = 2√R, with
/// σ_r = σ_A / √R.
///
/// # Errors
///
/// [`Error::Domain`] when the fitted amplitude is not a positive peak.
pub fn ratio_from_reflection_fit(fit: &LorentzFit) -> Result<RatioEstimate> {
    if !fit.amplitude.is_finite() || fit.amplitude <= 0.0 {
        return Err(Error::Domain(format!(
            "reflection fit amplitude {} is not a positive peak",
            fit.amplitude
        )));
    }
    let r_sc = focus::ratio_from_reflectivity(fit.amplitude)?;
    Ok(RatioEstimate {
        r_sc,
        sigma: fit.sigma_amplitude / fit.amplitude.sqrt(),
    })
}
