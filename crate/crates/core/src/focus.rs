//! Semiclassical strong-focusing model: how much of a focused Gaussian
//! mode a single atom at the focus scatters, and what that does to the
//! transmitted and reflected power.
//!
//! The central quantity is the dimensionless scattering ratio as a
//! function of the focusing strength u (input waist over focal length,
//! equal to the tangent of the divergence half-angle):
//!
//! R_sc(u) = (3 / 4u³) e^(2/u²) [Γ(−1/4, 1/u²) + u Γ(1/4, 1/u²)]²
//!
//! evaluated through the exponentially scaled incomplete gamma kernel so
//! that weak focusing (x = 1/u² up to ~10⁶) stays representable. On
//! resonance the power transmission and reflection of the mode follow
//! algebraically:
//!
//! 1 − T = 1 − (1 − R_sc/2)²,  R = R_sc²/4
//!
//! and the focal field enhancement over the paraxial estimate is
//! (E_A/E_L)² = π² w_L² R_sc / (3 λ²).

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::scaled_upper_gamma;

/// Focusing strength above which results carry a validity flag: the
/// scattering-ratio derivation assumes a Gaussian input mode and is not
/// validated for extreme focusing. Values are still computed.
pub const MODEL_VALIDITY_LIMIT: f64 = 10.0;

/// Below this focusing strength the closed small-u expansion
/// R_sc = 3u²(1 − 2u²) + O(u⁶) replaces the full expression: its
/// truncation error (~3u⁴, i.e. 3e−12 relative at the cutoff) is smaller
/// than the cancellation noise of the gamma-function route there.
const SMALL_U_CUTOFF: f64 = 1e-3;

/// Scattering ratio R_sc(u) of a focused Gaussian mode at a single atom.
///
/// Relative accuracy 1e−9 or better over the supported range. Above
/// [`MODEL_VALIDITY_LIMIT`] the value is still returned; use
/// [`ScatterResult`] to carry the validity flag to reports.
///
/// # Errors
///
/// [`Error::Domain`] for u ≤ 0 or non-finite u.
pub fn scattering_ratio(u: f64) -> Result<f64> {
    if !u.is_finite() || u <= 0.0 {
        return Err(Error::Domain(format!(
            "focusing strength must be positive and finite, got u = {u}"
        )));
    }
    if u < SMALL_U_CUTOFF {
        let u2 = u * u;
        return Ok(3.0 * u2 * (1.0 - 2.0 * u2));
    }
    let x = 1.0 / (u * u);
    let neg_quarter = scaled_upper_gamma(-0.25, x)?;
    let pos_quarter = scaled_upper_gamma(0.25, x)?;
    let bracket = neg_quarter + u * pos_quarter;
    Ok(0.75 / (u * u * u) * bracket * bracket)
}

/// Location and value of the global maximum of the scattering ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringMaximum {
    /// Focusing strength at the maximum.
    pub u: f64,
    /// Scattering ratio at the maximum.
    pub value: f64,
}

/// Locates the single interior maximum of [`scattering_ratio`] by
/// golden-section search to an interval of 1e−10 in u, cached after the
/// first call.
///
/// Near the maximum the curve is flat (quadratic), so the returned `u` is
/// meaningful to roughly the square root of the evaluation noise (~1e−6)
/// even though the search interval is far tighter; `value` is accurate to
/// full evaluation precision.
pub fn scattering_ratio_maximum() -> Result<ScatteringMaximum> {
    static CACHE: OnceLock<Result<ScatteringMaximum>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            // R_sc rises from 0.51 at u = 0.5 to ~1.46 and falls to 1.26
            // by u = 4, so the bracket contains the single maximum.
            let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
            let (mut lo, mut hi) = (0.5_f64, 4.0_f64);
            let mut inner_lo = hi - inv_phi * (hi - lo);
            let mut inner_hi = lo + inv_phi * (hi - lo);
            let mut f_lo = scattering_ratio(inner_lo)?;
            let mut f_hi = scattering_ratio(inner_hi)?;
            while hi - lo > 1e-10 {
                if f_lo > f_hi {
                    hi = inner_hi;
                    inner_hi = inner_lo;
                    f_hi = f_lo;
                    inner_lo = hi - inv_phi * (hi - lo);
                    f_lo = scattering_ratio(inner_lo)?;
                } else {
                    lo = inner_lo;
                    inner_lo = inner_hi;
                    f_lo = f_hi;
                    inner_hi = lo + inv_phi * (hi - lo);
                    f_hi = scattering_ratio(inner_hi)?;
                }
            }
            let u = 0.5 * (lo + hi);
            Ok(ScatteringMaximum {
                u,
                value: scattering_ratio(u)?,
            })
        })
        .clone()
}

/// On-resonance extinction 1 − T = 1 − (1 − r_sc/2)².
///
/// # Errors
///
/// [`Error::Domain`] for negative or non-finite input.
pub fn extinction(r_sc: f64) -> Result<f64> {
    validate_ratio(r_sc)?;
    let half = 1.0 - r_sc / 2.0;
    Ok(1.0 - half * half)
}

/// On-resonance reflectivity R = r_sc²/4.
///
/// # Errors
///
/// [`Error::Domain`] for negative or non-finite input.
pub fn reflectivity(r_sc: f64) -> Result<f64> {
    validate_ratio(r_sc)?;
    Ok(r_sc * r_sc / 4.0)
}

/// Inverts the on-resonance extinction on the physical branch r_sc ≤ 2:
/// r_sc = 2 (1 − √(1 − extinction)).
///
/// # Errors
///
/// [`Error::Domain`] unless 0 ≤ extinction ≤ 1.
pub fn ratio_from_extinction(extinction: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&extinction) || !extinction.is_finite() {
        return Err(Error::Domain(format!(
            "extinction must lie in [0, 1] for inversion, got {extinction}"
        )));
    }
    Ok(2.0 * (1.0 - (1.0 - extinction).sqrt()))
}

/// Inverts the on-resonance reflectivity: r_sc = 2 √R.
///
/// # Errors
///
/// [`Error::Domain`] for negative or non-finite input.
pub fn ratio_from_reflectivity(reflectivity: f64) -> Result<f64> {
    if !reflectivity.is_finite() || reflectivity < 0.0 {
        return Err(Error::Domain(format!(
            "reflectivity must be nonnegative for inversion, got {reflectivity}"
        )));
    }
    Ok(2.0 * reflectivity.sqrt())
}

/// Focusing geometry before the lens: input waist, focal length, and
/// wavelength, from which the focusing strength follows as u = w_L/f.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FocusGeometry {
    /// Beam waist just before the focusing lens, m.
    pub waist_before_lens: f64,
    /// Focal length of the lens, m.
    pub focal_length: f64,
    /// Wavelength, m.
    pub wavelength: f64,
}

impl FocusGeometry {
    /// Validates all lengths positive and finite.
    pub fn new(waist_before_lens: f64, focal_length: f64, wavelength: f64) -> Result<Self> {
        for (name, value) in [
            ("waist_before_lens", waist_before_lens),
            ("focal_length", focal_length),
            ("wavelength", wavelength),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::Domain(format!(
                    "{name} must be positive and finite, got {value} m"
                )));
            }
        }
        Ok(FocusGeometry {
            waist_before_lens,
            focal_length,
            wavelength,
        })
    }

    /// Focusing strength u = w_L / f.
    pub fn focusing_strength(&self) -> f64 {
        self.waist_before_lens / self.focal_length
    }
}

/// Squared focal field enhancement over the paraxial estimate,
/// (E_A/E_L)² = π² w_L² R_sc(u) / (3 λ²).
pub fn field_enhancement_sq(geometry: &FocusGeometry) -> Result<f64> {
    let r_sc = scattering_ratio(geometry.focusing_strength())?;
    let w = geometry.waist_before_lens;
    let lambda = geometry.wavelength;
    Ok(std::f64::consts::PI.powi(2) * w * w * r_sc / (3.0 * lambda * lambda))
}

/// Effective focusing strength reproducing a measured scattering ratio,
/// on the ascending branch u ∈ (0, argmax].
///
/// Solves scattering_ratio(u) = r_sc to 1e−9 absolute (in the ratio) by
/// bisection; the ascending branch is the physically relevant one for
/// experiments below the optimum.
///
/// # Errors
///
/// [`Error::Domain`] for r_sc ≤ 0; [`Error::OutOfRange`] when r_sc meets
/// or exceeds the branch maximum.
pub fn effective_focusing_from_ratio(r_sc_measured: f64) -> Result<f64> {
    if !r_sc_measured.is_finite() || r_sc_measured <= 0.0 {
        return Err(Error::Domain(format!(
            "measured scattering ratio must be positive, got {r_sc_measured}"
        )));
    }
    let maximum = scattering_ratio_maximum()?;
    if r_sc_measured >= maximum.value {
        return Err(Error::OutOfRange(format!(
            "scattering ratio {r_sc_measured} is not below the branch maximum \
             {:.10} (at u = {:.4}); no ascending-branch solution",
            maximum.value, maximum.u
        )));
    }
    // Lower bracket from the small-u law R_sc ≈ 3u²: halving the
    // asymptotic inverse guarantees R_sc(lo) ≈ r/4 < r.
    let mut lo = 0.5 * (r_sc_measured / 3.0).sqrt();
    let mut hi = maximum.u;
    debug_assert!(scattering_ratio(lo)? < r_sc_measured);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval exhausted at f64 resolution
        }
        if scattering_ratio(mid)? < r_sc_measured {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// On-resonance scattering observables for one focusing configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatterResult {
    /// Scattering ratio R_sc.
    pub r_sc: f64,
    /// On-resonance extinction 1 − T.
    pub extinction: f64,
    /// On-resonance reflectivity R = r_sc²/4.
    pub reflectivity: f64,
    /// Squared focal field enhancement; requires geometry (waist and
    /// wavelength), absent when built from a bare focusing strength.
    pub enhancement_sq: Option<f64>,
    /// Set when u exceeds [`MODEL_VALIDITY_LIMIT`]: the number is computed
    /// from the same formula but outside the model's validated range.
    pub beyond_model_validity: bool,
}

impl ScatterResult {
    /// Observables from a bare focusing strength (no field enhancement).
    pub fn from_focusing(u: f64) -> Result<Self> {
        let r_sc = scattering_ratio(u)?;
        Ok(ScatterResult {
            r_sc,
            extinction: extinction(r_sc)?,
            reflectivity: reflectivity(r_sc)?,
            enhancement_sq: None,
            beyond_model_validity: u > MODEL_VALIDITY_LIMIT,
        })
    }

    /// Observables from a full geometry, including field enhancement.
    pub fn from_geometry(geometry: &FocusGeometry) -> Result<Self> {
        let u = geometry.focusing_strength();
        let mut result = Self::from_focusing(u)?;
        result.enhancement_sq = Some(field_enhancement_sq(geometry)?);
        Ok(result)
    }
}

fn validate_ratio(r_sc: f64) -> Result<()> {
    if !r_sc.is_finite() || r_sc < 0.0 {
        return Err(Error::Domain(format!(
            "scattering ratio must be nonnegative and finite, got {r_sc}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Frozen from a 40-digit arbitrary-precision evaluation of the
    // scattering-ratio formula, independent of this implementation.
    const RSC_PAPER_FOCUSING: f64 = 0.201_725_825_888_166_71; // u = 0.278
    const RSC_HALF: f64 = 0.512_756_809_345_529_64; // u = 0.5
    const RSC_ONE: f64 = 1.088_759_898_724_055_7; // u = 1
    const RSC_TWO: f64 = 1.448_507_081_500_789_0; // u = 2
    const RSC_FIVE: f64 = 1.169_772_955_9; // u = 5
    const RSC_TEN: f64 = 0.755_452_993_7; // u = 10
    const ARGMAX_U: f64 = 2.239_199_908_025_010_1;
    const MAX_VALUE: f64 = 1.456_026_863_006_119_9;
    const U_FOR_PAPER_RATIO: f64 = 0.277_427_225_816_536_16; // R_sc = 0.201

    #[test]
    fn matches_frozen_reference_values() {
        assert_relative_eq!(
            scattering_ratio(0.278).unwrap(),
            RSC_PAPER_FOCUSING,
            max_relative = 1e-12
        );
        assert_relative_eq!(scattering_ratio(0.5).unwrap(), RSC_HALF, max_relative = 1e-12);
        assert_relative_eq!(scattering_ratio(1.0).unwrap(), RSC_ONE, max_relative = 1e-12);
        assert_relative_eq!(scattering_ratio(2.0).unwrap(), RSC_TWO, max_relative = 1e-12);
        assert_relative_eq!(scattering_ratio(5.0).unwrap(), RSC_FIVE, max_relative = 1e-9);
        assert_relative_eq!(scattering_ratio(10.0).unwrap(), RSC_TEN, max_relative = 1e-9);
    }

    #[test]
    fn small_focusing_follows_three_u_squared() {
        let ratio = scattering_ratio(1e-3).unwrap() / 3e-6;
        // The leading correction is −2u² = −2e−6; far inside the 1%
        // asymptote bound.
        assert!((ratio - 1.0).abs() < 3e-6, "ratio deviation {}", ratio - 1.0);
    }

    #[test]
    fn expansion_joins_full_formula_continuously_at_cutoff() {
        // At u = 1e-3 the implementation takes the gamma-function route;
        // it must agree with the closed expansion used just below the
        // cutoff to ~1e-11 (expansion truncation ~3e-12 plus kernel noise).
        let u = 1e-3;
        let expansion = 3.0 * u * u * (1.0 - 2.0 * u * u);
        assert_relative_eq!(scattering_ratio(u).unwrap(), expansion, max_relative = 1e-9);
        // Just below the cutoff the expansion itself is returned.
        let below = 0.999e-3;
        let expansion_below = 3.0 * below * below * (1.0 - 2.0 * below * below);
        assert_eq!(scattering_ratio(below).unwrap(), expansion_below);
    }

    #[test]
    fn maximum_location_and_value() {
        let max = scattering_ratio_maximum().unwrap();
        // The value is sharp; the location is limited by the quadratic
        // flatness of the peak against ~1e−13 evaluation noise.
        assert_relative_eq!(max.value, MAX_VALUE, max_relative = 1e-12);
        assert!((max.u - ARGMAX_U).abs() < 1e-5, "argmax u = {}", max.u);
        assert!(max.value > scattering_ratio(max.u - 1e-3).unwrap());
        assert!(max.value > scattering_ratio(max.u + 1e-3).unwrap());
    }

    #[test]
    fn extinction_and_reflectivity_match_paper_figures() {
        // 1 − (1 − 0.083/2)² = 0.08127775 exactly in decimal arithmetic.
        assert_relative_eq!(extinction(0.083).unwrap(), 0.081_277_75, max_relative = 1e-12);
        assert!((0.080..=0.084).contains(&extinction(0.083).unwrap()));
        assert_relative_eq!(reflectivity(0.080).unwrap(), 0.0016, max_relative = 1e-12);
        assert_eq!(extinction(0.0).unwrap(), 0.0);
        assert_eq!(reflectivity(0.0).unwrap(), 0.0);
        assert_relative_eq!(extinction(2.0).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(reflectivity(1.4).unwrap(), 0.49, max_relative = 1e-15);
    }

    #[test]
    fn transmission_identity_is_algebraic() {
        for &r in &[0.0, 0.083, 0.201, 0.5, 1.0, 1.456, 2.0] {
            let lhs = extinction(r).unwrap();
            let rhs = r - r * r / 4.0;
            assert_relative_eq!(lhs, rhs, max_relative = 1e-14, epsilon = 1e-16);
        }
    }

    #[test]
    fn inversion_round_trips() {
        let r = scattering_ratio(1.0).unwrap();
        let u = effective_focusing_from_ratio(r).unwrap();
        assert!((scattering_ratio(u).unwrap() - r).abs() < 1e-9);
        assert_relative_eq!(u, 1.0, max_relative = 1e-9);

        let u_paper = effective_focusing_from_ratio(0.201).unwrap();
        assert_relative_eq!(u_paper, U_FOR_PAPER_RATIO, max_relative = 1e-9);
        assert!((u_paper - 0.278).abs() < 1e-3);
    }

    #[test]
    fn inversion_follows_small_ratio_asymptote() {
        let r = 3e-12;
        let u = effective_focusing_from_ratio(r).unwrap();
        assert_relative_eq!(u, (r / 3.0).sqrt(), max_relative = 1e-5);
    }

    #[test]
    fn inversion_rejects_out_of_branch_requests() {
        assert!(matches!(
            effective_focusing_from_ratio(1.5),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(
            effective_focusing_from_ratio(0.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            effective_focusing_from_ratio(-0.1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn extinction_inversions_match_paper_pairings() {
        assert_relative_eq!(
            ratio_from_extinction(0.082).unwrap(),
            0.083_753_669_279_442_56,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            ratio_from_reflectivity(0.0016).unwrap(),
            0.080,
            max_relative = 1e-12
        );
        // Round trips through the forward maps.
        for &r in &[0.01, 0.083, 0.2, 1.0, 1.9] {
            assert_relative_eq!(
                ratio_from_extinction(extinction(r).unwrap()).unwrap(),
                r,
                max_relative = 1e-10
            );
            assert_relative_eq!(
                ratio_from_reflectivity(reflectivity(r).unwrap()).unwrap(),
                r,
                max_relative = 1e-12
            );
        }
        assert!(ratio_from_extinction(1.2).is_err());
        assert!(ratio_from_reflectivity(-0.1).is_err());
    }

    #[test]
    fn field_enhancement_matches_frozen_geometry_value() {
        let geometry = FocusGeometry::new(1.25e-3, 4.5e-3, 780e-9).unwrap();
        assert_relative_eq!(
            field_enhancement_sq(&geometry).unwrap(),
            1_702_017.160_974_120_5,
            max_relative = 1e-12
        );
        // Amplitude ratio ~1.3e3, i.e. enhancement_sq ~1.7e6.
        assert!((1.3e3..1.4e3).contains(&field_enhancement_sq(&geometry).unwrap().sqrt()));
    }

    #[test]
    fn field_enhancement_scales_with_wavelength() {
        let base = FocusGeometry::new(1.25e-3, 4.5e-3, 780e-9).unwrap();
        let doubled = FocusGeometry::new(1.25e-3, 4.5e-3, 2.0 * 780e-9).unwrap();
        assert_relative_eq!(
            field_enhancement_sq(&doubled).unwrap(),
            field_enhancement_sq(&base).unwrap() / 4.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn scatter_result_carries_validity_flag() {
        let inside = ScatterResult::from_focusing(2.0).unwrap();
        assert!(!inside.beyond_model_validity);
        assert!(inside.enhancement_sq.is_none());
        let outside = ScatterResult::from_focusing(12.0).unwrap();
        assert!(outside.beyond_model_validity);

        let geometry = FocusGeometry::new(1.25e-3, 4.5e-3, 780e-9).unwrap();
        let full = ScatterResult::from_geometry(&geometry).unwrap();
        assert!(full.enhancement_sq.is_some());
        assert_relative_eq!(full.r_sc, 0.201_444_133_059_166_24, max_relative = 1e-12);
    }

    #[test]
    fn rejects_nonpositive_focusing() {
        assert!(matches!(scattering_ratio(0.0), Err(Error::Domain(_))));
        assert!(matches!(scattering_ratio(-1.0), Err(Error::Domain(_))));
        assert!(matches!(scattering_ratio(f64::NAN), Err(Error::Domain(_))));
        assert!(FocusGeometry::new(0.0, 1.0, 1.0).is_err());
    }
}
