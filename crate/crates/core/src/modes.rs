//! Quantized-mode bookkeeping: effective mode volumes, single-photon
//! field normalization constants, the focused-mode dispersion relation,
//! and the discrete-to-continuum conversion factor.
//!
//! Every normalization constant reported here satisfies
//! value = √(ħω / (2 ε₀ V_eff)) with its own reported effective volume,
//! so the paraxial, focused running-wave, and standing-wave cases differ
//! only in what V_eff is:
//!
//! * paraxial:            V = π L w² / 2
//! * focused running wave: V_eff = 3 λ² L / (2π R_sc(u))
//! * standing wave:        half the running-wave volume (the axial
//!   cos² averaging doubles the peak-field weight)
//!
//! L is the quantization length (doubling as the mirror separation for
//! the cavity estimates); physical continuum results must cancel it,
//! which [`ContinuumDensity`] tracks explicitly.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::constants::{HBAR, SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};
use crate::error::{Error, Result};
use crate::focus::scattering_ratio;

/// Single-photon field normalization constant and the effective mode
/// volume it corresponds to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormConstant {
    /// Field amplitude scale, V/m.
    pub value: f64,
    /// Effective mode volume V_eff with value = √(ħω/(2 ε₀ V_eff)), m³.
    pub mode_volume: f64,
}

/// Paraxial mode volume V = π L w² / 2.
///
/// The plain paraxial formula nominally assumes L below the Rayleigh
/// range; the value is computed regardless (see
/// [`within_paraxial_validity`] for the nominal-domain check).
pub fn mode_volume_paraxial(waist: f64, length: f64) -> Result<f64> {
    require_positive("waist", waist)?;
    require_positive("quantization length", length)?;
    Ok(PI * length * waist * waist / 2.0)
}

/// Nominal-domain check for the plain paraxial formula: true when the
/// quantization length stays below the Rayleigh range z_R = π w²/λ.
pub fn within_paraxial_validity(waist: f64, length: f64, wavelength: f64) -> Result<bool> {
    require_positive("waist", waist)?;
    require_positive("quantization length", length)?;
    require_positive("wavelength", wavelength)?;
    Ok(length < PI * waist * waist / wavelength)
}

/// Dispersion relation of the focused Gaussian mode, ω = c √(k² + 2/w²).
///
/// The 2/w² term is the transverse confinement correction; it vanishes in
/// the plane-wave limit w → ∞.
pub fn dispersion_omega(k: f64, waist: f64) -> Result<f64> {
    require_positive("wavenumber", k)?;
    require_positive("waist", waist)?;
    Ok(SPEED_OF_LIGHT * (k * k + 2.0 / (waist * waist)).sqrt())
}

/// Paraxial normalization constant, value = √(ħω / (π w² L ε₀)), with the
/// paraxial mode volume.
pub fn norm_paraxial(omega: f64, waist: f64, length: f64) -> Result<NormConstant> {
    require_positive("angular frequency", omega)?;
    require_positive("waist", waist)?;
    require_positive("quantization length", length)?;
    let value = (HBAR * omega / (PI * waist * waist * length * VACUUM_PERMITTIVITY)).sqrt();
    Ok(NormConstant {
        value,
        mode_volume: mode_volume_paraxial(waist, length)?,
    })
}

/// Focused running-wave normalization constant,
/// value = √(π ħω R_sc(u) / (3 λ² L ε₀)) with ω = 2πc/λ, and the matching
/// effective volume V_eff = 3 λ² L / (2π R_sc(u)).
pub fn norm_focused_running(wavelength: f64, length: f64, u: f64) -> Result<NormConstant> {
    require_positive("wavelength", wavelength)?;
    require_positive("quantization length", length)?;
    let r_sc = scattering_ratio(u)?;
    let omega = 2.0 * PI * SPEED_OF_LIGHT / wavelength;
    let lambda_sq = wavelength * wavelength;
    let value = (PI * HBAR * omega * r_sc / (3.0 * lambda_sq * length * VACUUM_PERMITTIVITY))
        .sqrt();
    Ok(NormConstant {
        value,
        mode_volume: 3.0 * lambda_sq * length / (2.0 * PI * r_sc),
    })
}

/// Standing-wave normalization constant: exactly √2 times the running-wave
/// value, i.e. half the effective mode volume.
pub fn norm_standing_wave(wavelength: f64, length: f64, u: f64) -> Result<NormConstant> {
    let running = norm_focused_running(wavelength, length, u)?;
    Ok(NormConstant {
        value: SQRT_2 * running.value,
        mode_volume: 0.5 * running.mode_volume,
    })
}

/// Conversion factor from a discrete mode sum to a frequency integral,
/// Σ_j → (L/2πc) ∫ dω. Physical continuum results must cancel the
/// quantization length carried here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuumDensity {
    /// Modes per unit angular frequency, s/rad.
    pub per_angular_frequency: f64,
    /// The quantization length the factor still depends on, m.
    pub quantization_length: f64,
}

impl ContinuumDensity {
    /// Longitudinal mode spacing Δω = 2πc/L, the inverse of the density.
    pub fn mode_spacing(&self) -> f64 {
        1.0 / self.per_angular_frequency
    }
}

/// Spectral density factor L/(2πc) for converting discrete mode sums to
/// integrals.
pub fn continuum_density_factor(length: f64) -> Result<ContinuumDensity> {
    require_positive("quantization length", length)?;
    Ok(ContinuumDensity {
        per_angular_frequency: length / (2.0 * PI * SPEED_OF_LIGHT),
        quantization_length: length,
    })
}

fn require_positive(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::Domain(format!(
            "{name} must be positive and finite, got {value}"
        )));
    }
    Ok(())
}
