//! Cavity-QED design estimates for a near-concentric resonator built
//! around strong focusing: effective dipole moment, single-photon
//! coupling rate, diffraction loss, finesse, and the anaclastic lens
//! geometry that produces the focused mode.
//!
//! The coupling rate follows the standing-wave normalization chain:
//! g₀ = 𝓔_standing · d_eff, with d_eff = √(3 ε₀ h λ³ / (8π² τ)) from the
//! excited-state lifetime, which collapses to the closed form
//! g₀/ħ = √(π c R_sc(u) / (τ L)). Both routes are implemented (the closed
//! form here, the chain in tests) and must agree to 1e−10.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::{PLANCK, SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};
use crate::error::{Error, Result};
use crate::focus::scattering_ratio;

/// An atomic transition characterized by wavelength and natural lifetime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtomLine {
    /// Transition wavelength, m.
    pub wavelength: f64,
    /// Excited-state lifetime, s.
    pub lifetime: f64,
}

impl AtomLine {
    /// Validates both fields positive and finite.
    pub fn new(wavelength: f64, lifetime: f64) -> Result<Self> {
        require_positive("wavelength", wavelength)?;
        require_positive("lifetime", lifetime)?;
        Ok(AtomLine {
            wavelength,
            lifetime,
        })
    }

    /// The rubidium D2 line: 780 nm, 26.25 ns.
    pub fn rubidium_d2() -> Self {
        AtomLine {
            wavelength: 780e-9,
            lifetime: 26.25e-9,
        }
    }

    /// Natural linewidth 1/(2πτ) in Hz.
    pub fn natural_linewidth_hz(&self) -> f64 {
        1.0 / (2.0 * PI * self.lifetime)
    }
}

/// Effective transition dipole moment d_eff = √(3 ε₀ h λ³ / (8 π² τ)),
/// in C·m, for a unit Clebsch–Gordan coefficient.
pub fn effective_dipole(line: &AtomLine) -> Result<f64> {
    require_positive("wavelength", line.wavelength)?;
    require_positive("lifetime", line.lifetime)?;
    let lambda_cubed = line.wavelength.powi(3);
    Ok((3.0 * VACUUM_PERMITTIVITY * PLANCK * lambda_cubed / (8.0 * PI * PI * line.lifetime))
        .sqrt())
}

/// Single-photon coupling rate, reported both as an angular frequency
/// (g₀/ħ) and as a cyclic frequency (g₀/2πħ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingRate {
    /// g₀/ħ, rad/s.
    pub rad_per_s: f64,
    /// g₀/(2πħ), Hz.
    pub hz: f64,
}

/// Coupling rate of a standing-wave cavity mode focused to strength u
/// over mirror separation `length`: g₀/ħ = √(π c R_sc(u) / (τ L)).
///
/// Assumes a unit Clebsch–Gordan coefficient; see
/// [`coupling_g0_with_clebsch_gordan`] for other transitions.
pub fn coupling_g0(u: f64, length: f64, line: &AtomLine) -> Result<CouplingRate> {
    coupling_g0_with_clebsch_gordan(u, length, line, 1.0)
}

/// [`coupling_g0`] with an explicit Clebsch–Gordan factor scaling the
/// dipole moment (and hence g₀ linearly).
pub fn coupling_g0_with_clebsch_gordan(
    u: f64,
    length: f64,
    line: &AtomLine,
    clebsch_gordan: f64,
) -> Result<CouplingRate> {
    require_positive("mirror separation", length)?;
    require_positive("lifetime", line.lifetime)?;
    if !clebsch_gordan.is_finite() || clebsch_gordan <= 0.0 {
        return Err(Error::Domain(format!(
            "Clebsch-Gordan factor must be positive, got {clebsch_gordan}"
        )));
    }
    let r_sc = scattering_ratio(u)?;
    let rad_per_s =
        clebsch_gordan * (PI * SPEED_OF_LIGHT * r_sc / (line.lifetime * length)).sqrt();
    Ok(CouplingRate {
        rad_per_s,
        hz: rad_per_s / (2.0 * PI),
    })
}

/// Per-round-trip diffraction loss of a mode of focusing strength u in a
/// cavity whose optics accept at most u₀: ε = e^(−2 u₀²/u²).
pub fn diffraction_loss(u: f64, u0: f64) -> Result<f64> {
    require_positive("focusing strength", u)?;
    require_positive("maximum accepted focusing", u0)?;
    Ok((-2.0 * u0 * u0 / (u * u)).exp())
}

/// Finesse estimate F = 2π/ρ for a total fractional round-trip loss ρ.
///
/// The caller assembles ρ (diffraction loss plus mirror transmission and
/// absorption budget); no loss budget is assumed here.
pub fn finesse_estimate(round_trip_loss: f64) -> Result<f64> {
    if !round_trip_loss.is_finite() || round_trip_loss <= 0.0 || round_trip_loss >= 1.0 {
        return Err(Error::Domain(format!(
            "round-trip loss must lie in (0, 1), got {round_trip_loss}"
        )));
    }
    Ok(2.0 * PI / round_trip_loss)
}

/// Half axes of the elliptical convex surface of an aspheric lens that
/// focuses a collimated beam without spherical aberration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LensEllipse {
    /// Half axis along the optical axis, a = f n/(n+1), m.
    pub half_axis_longitudinal: f64,
    /// Transverse half axis, b = f √((n−1)/(n+1)), m.
    pub half_axis_transverse: f64,
}

/// Ellipse half axes of the aberration-free (anaclastic) lens surface for
/// focal length `f` and refractive index `n`.
pub fn anaclastic_lens(f: f64, n: f64) -> Result<LensEllipse> {
    require_positive("focal length", f)?;
    if !n.is_finite() || n <= 1.0 {
        return Err(Error::Domain(format!(
            "refractive index must exceed 1, got {n}"
        )));
    }
    Ok(LensEllipse {
        half_axis_longitudinal: f * n / (n + 1.0),
        half_axis_transverse: f * ((n - 1.0) / (n + 1.0)).sqrt(),
    })
}

/// Maximum focusing strength accepted at a half-opening angle Θ₀:
/// u₀ = tan Θ₀, for 0 < Θ₀ < π/2.
pub fn max_focusing_from_angle(theta0: f64) -> Result<f64> {
    if !theta0.is_finite() || theta0 <= 0.0 || theta0 >= PI / 2.0 {
        return Err(Error::Domain(format!(
            "half-opening angle must lie in (0, pi/2), got {theta0} rad"
        )));
    }
    Ok(theta0.tan())
}

fn require_positive(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::Domain(format!(
            "{name} must be positive and finite, got {value}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::HBAR;
    use crate::modes::norm_standing_wave;
    use approx::assert_relative_eq;

    // Frozen from independent arbitrary-precision arithmetic.
    const DIPOLE_RB_D2: f64 = 6.348_123_848_135_771_5e-29; // C·m
    const G0_RAD_PAPER: f64 = 850_748_878.063; // u = 0.278, L = 10 mm
    const G0_MHZ_PAPER: f64 = 135.400_889_27; // same, cyclic, MHz
    const THRESHOLD_U: f64 = 0.011_613_095_281_824_373; // g0 = linewidth at 10 mm
    const LENS_TRANSVERSE: f64 = 2.012_461_179_749_810_7e-3; // f 4.5 mm, n 1.5

    #[test]
    fn dipole_matches_frozen_reference_and_scalings() {
        let d = effective_dipole(&AtomLine::rubidium_d2()).unwrap();
        assert_relative_eq!(d, DIPOLE_RB_D2, max_relative = 1e-13);

        let slow = AtomLine::new(780e-9, 4.0 * 26.25e-9).unwrap();
        assert_relative_eq!(
            effective_dipole(&slow).unwrap(),
            d / 2.0,
            max_relative = 1e-15
        );
        let red = AtomLine::new(4.0 * 780e-9, 26.25e-9).unwrap();
        assert_relative_eq!(
            effective_dipole(&red).unwrap(),
            8.0 * d,
            max_relative = 1e-15
        );
    }

    #[test]
    fn coupling_matches_frozen_paper_configuration() {
        let g = coupling_g0(0.278, 0.01, &AtomLine::rubidium_d2()).unwrap();
        assert_relative_eq!(g.rad_per_s, G0_RAD_PAPER, max_relative = 1e-9);
        assert_relative_eq!(g.hz / 1e6, G0_MHZ_PAPER, max_relative = 1e-9);
    }

    #[test]
    fn coupling_agrees_with_normalization_chain() {
        // g₀ = 𝓔_standing · d_eff must reproduce the closed form.
        let line = AtomLine::rubidium_d2();
        let dipole = effective_dipole(&line).unwrap();
        for &u in &[0.1, 0.278, 0.5, 1.0, 2.0] {
            for &length in &[0.001, 0.01, 0.1] {
                let field = norm_standing_wave(line.wavelength, length, u).unwrap();
                let chain = field.value * dipole / HBAR;
                let closed = coupling_g0(u, length, &line).unwrap().rad_per_s;
                assert_relative_eq!(chain, closed, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn coupling_follows_inverse_sqrt_length_exactly() {
        let line = AtomLine::rubidium_d2();
        let short = coupling_g0(0.5, 0.01, &line).unwrap();
        let long = coupling_g0(0.5, 0.04, &line).unwrap();
        // Quartering the length halves g₀ with no rounding slack: the
        // length enters one power-of-two-scaled division and a square root.
        assert_eq!(long.rad_per_s * 2.0, short.rad_per_s);
    }

    #[test]
    fn coupling_is_monotone_in_focusing_up_to_argmax() {
        let line = AtomLine::rubidium_d2();
        let mut previous = 0.0;
        for i in 1..=22 {
            let u = 0.1 * i as f64; // up to 2.2, just below argmax
            let g = coupling_g0(u, 0.01, &line).unwrap().rad_per_s;
            assert!(g > previous, "not increasing at u = {u}");
            previous = g;
        }
    }

    #[test]
    fn coupling_threshold_exceeds_natural_linewidth_early() {
        let line = AtomLine::rubidium_d2();
        assert_relative_eq!(line.natural_linewidth_hz(), 6.063_045_451_1e6, max_relative = 1e-9);
        // Bisect for the u where g₀/2πħ crosses the linewidth at L = 10 mm.
        let target = line.natural_linewidth_hz();
        let (mut lo, mut hi) = (1e-4, 0.1);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if coupling_g0(mid, 0.01, &line).unwrap().hz < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let threshold = 0.5 * (lo + hi);
        assert_relative_eq!(threshold, THRESHOLD_U, max_relative = 1e-6);
        // "Already at small u": far below the paper's working point 0.278.
        assert!(threshold < 0.05);
    }

    #[test]
    fn coupling_scale_bracket_for_strong_focusing() {
        let g = coupling_g0(2.0, 0.01, &AtomLine::rubidium_d2()).unwrap();
        assert!((1e8..1e9).contains(&g.hz), "g0 = {} Hz", g.hz);
    }

    #[test]
    fn clebsch_gordan_scales_linearly() {
        let line = AtomLine::rubidium_d2();
        let unit = coupling_g0(0.5, 0.01, &line).unwrap();
        let scaled = coupling_g0_with_clebsch_gordan(0.5, 0.01, &line, 0.5).unwrap();
        assert_relative_eq!(scaled.rad_per_s, 0.5 * unit.rad_per_s, max_relative = 1e-15);
        assert!(coupling_g0_with_clebsch_gordan(0.5, 0.01, &line, 0.0).is_err());
    }

    #[test]
    fn diffraction_loss_reference_points() {
        // 2·1²/0.5² = 8 exactly in binary, so the value is e^(−8) to the bit.
        assert_eq!(diffraction_loss(0.5, 1.0).unwrap(), (-8.0f64).exp());
        assert!((1e-4..1e-2).contains(&diffraction_loss(0.5, 1.0).unwrap()));
        assert_relative_eq!(
            diffraction_loss(0.7, 0.7).unwrap(),
            (-2.0f64).exp(),
            max_relative = 1e-15
        );
        // Vanishes for weak focusing, grows monotonically.
        assert!(diffraction_loss(0.01, 1.0).unwrap() == 0.0);
        let mut previous = 0.0;
        for i in 1..40 {
            let loss = diffraction_loss(0.1 * i as f64, 1.0).unwrap();
            assert!(loss > previous);
            previous = loss;
        }
    }

    #[test]
    fn finesse_is_two_pi_over_loss() {
        assert_relative_eq!(
            finesse_estimate(2.0 * PI / 100.0).unwrap(),
            100.0,
            max_relative = 1e-15
        );
        let diffraction_only = finesse_estimate((-8.0f64).exp()).unwrap();
        assert_relative_eq!(diffraction_only, 18_729.911_425_500_223, max_relative = 1e-12);
        assert_relative_eq!(
            finesse_estimate(0.02).unwrap(),
            2.0 * finesse_estimate(0.04).unwrap(),
            max_relative = 1e-15
        );
        assert!(finesse_estimate(0.0).is_err());
        assert!(finesse_estimate(1.0).is_err());
    }

    #[test]
    fn lens_ellipse_matches_reference_and_limits() {
        let lens = anaclastic_lens(4.5e-3, 1.5).unwrap();
        assert_relative_eq!(lens.half_axis_longitudinal, 2.7e-3, max_relative = 1e-15);
        assert_relative_eq!(
            lens.half_axis_transverse,
            LENS_TRANSVERSE,
            max_relative = 1e-15
        );
        // b < a for every n > 1.
        for &n in &[1.01, 1.5, 2.0, 4.0, 100.0] {
            let e = anaclastic_lens(1.0, n).unwrap();
            assert!(e.half_axis_transverse < e.half_axis_longitudinal);
        }
        // Both half axes approach f as n grows.
        let extreme = anaclastic_lens(1.0, 1e9).unwrap();
        assert!((extreme.half_axis_longitudinal - 1.0).abs() < 2e-9);
        assert!((extreme.half_axis_transverse - 1.0).abs() < 2e-9);
        assert!(anaclastic_lens(4.5e-3, 1.0).is_err());
    }

    #[test]
    fn opening_angle_conversion() {
        assert_relative_eq!(
            max_focusing_from_angle(PI / 4.0).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            max_focusing_from_angle(PI / 3.0).unwrap(),
            3f64.sqrt(),
            max_relative = 1e-15
        );
        assert!(max_focusing_from_angle(0.0).is_err());
        assert!(max_focusing_from_angle(PI / 2.0).is_err());
    }
}
