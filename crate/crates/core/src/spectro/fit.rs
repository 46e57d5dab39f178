//! Weighted Levenberg–Marquardt fit of a Lorentzian line profile to
//! normalized spectrum points.
//!
//! The model is value(Δ) = offset + A·(δf/2)²/((Δ−Δf₀)² + (δf/2)²) with
//! the offset held fixed (1 for transmission, 0 for reflection) and
//! three free parameters [A, Δf₀, δf]. Parameter uncertainties come from
//! the curvature matrix at the optimum, σ_k = √[(JᵀWJ)⁻¹]_kk, with the
//! measured Poisson σ per point — no reduced-χ² rescaling, so the quoted
//! errors are the counting-statistics errors.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::error::{Error, Result};

/// Result of a Lorentzian line fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LorentzFit {
    /// Fitted signed amplitude: negative for a transmission dip,
    /// positive for a reflection peak.
    pub amplitude: f64,
    /// Fitted line center, MHz.
    pub center_mhz: f64,
    /// Fitted full width at half maximum, MHz.
    pub fwhm_mhz: f64,
    /// The fixed baseline the fit was performed against.
    pub offset: f64,
    /// Standard deviation of the amplitude.
    pub sigma_amplitude: f64,
    /// Standard deviation of the center, MHz.
    pub sigma_center_mhz: f64,
    /// Standard deviation of the width, MHz.
    pub sigma_fwhm_mhz: f64,
    /// χ² per degree of freedom (n − 3) at the optimum.
    pub chi2_reduced: f64,
}

const MAX_CYCLES: usize = 200;
const LAMBDA_INIT: f64 = 1e-3;
const LAMBDA_MIN: f64 = 1e-12;
const REL_OBJECTIVE_TOL: f64 = 1e-10;
const REL_STEP_TOL: f64 = 1e-8;
const ABSOLUTE_FLOOR: f64 = 1e-20;

/// Fits `offset + A·L(Δ; Δf₀, δf)` to weighted points
/// `(detuning, value, sigma)` by Levenberg–Marquardt.
///
/// `init` optionally seeds `[A, Δf₀, δf]`; otherwise the start is taken
/// from the most extreme deviation from the offset and half the spanned
/// detuning range. The fit is deterministic: identical inputs produce
/// bit-identical outputs.
///
/// # Errors
///
/// [`Error::DegenerateData`] for fewer than 4 points, non-finite or
/// non-positive σ, all detunings equal, all values equal, or a singular
/// normal matrix; [`Error::Domain`] for a non-positive initial width;
/// [`Error::FitNotConverged`] when 200 cycles pass without meeting any
/// convergence test.
pub fn fit_lorentzian(
    data: &[(f64, f64, f64)],
    offset: f64,
    init: Option<[f64; 3]>,
) -> Result<LorentzFit> {
    if data.len() < 4 {
        return Err(Error::DegenerateData(format!(
            "need at least 4 points to fit 3 parameters, got {}",
            data.len()
        )));
    }
    for &(x, y, sigma) in data {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::DegenerateData(format!(
                "non-finite data point ({x}, {y})"
            )));
        }
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::DegenerateData(format!(
                "sigma must be positive and finite, got {sigma} at detuning {x} MHz"
            )));
        }
    }
    let all_same_x = data.iter().all(|p| p.0 == data[0].0);
    if all_same_x {
        return Err(Error::DegenerateData(
            "all detunings identical; line shape is unconstrained".into(),
        ));
    }
    let all_same_y = data.iter().all(|p| p.1 == data[0].1);
    if all_same_y {
        return Err(Error::DegenerateData(
            "all values identical; no line to fit".into(),
        ));
    }

    let mut params = match init {
        Some(start) => start,
        None => default_init(data, offset),
    };
    if !params[2].is_finite() || params[2] <= 0.0 {
        return Err(Error::Domain(format!(
            "initial fwhm must be positive, got {}",
            params[2]
        )));
    }

    let mut lambda = LAMBDA_INIT;
    let mut chi2 = chi_squared(data, offset, &params);
    let mut converged = false;

    for _ in 0..MAX_CYCLES {
        let (jtj, jtr) = normal_equations(data, offset, &params);

        // Damped system: (JᵀWJ + λ·diag(JᵀWJ)) δ = JᵀW r.
        let mut damped = jtj;
        for k in 0..3 {
            damped[(k, k)] *= 1.0 + lambda;
        }
        let step = match damped.lu().solve(&jtr) {
            Some(step) => step,
            None => {
                return Err(Error::DegenerateData(
                    "normal equations are singular; parameters are not \
                     independently constrained by the data"
                        .into(),
                ))
            }
        };

        let trial = [params[0] + step[0], params[1] + step[1], params[2] + step[2]];
        if trial[2] <= 0.0 || !trial.iter().all(|p| p.is_finite()) {
            // Invalid region: treat as a rejected step and steepen.
            lambda *= 10.0;
            if !lambda.is_finite() {
                return Err(Error::FitNotConverged {
                    cycles: MAX_CYCLES,
                    best: params,
                    best_objective: chi2,
                });
            }
            continue;
        }

        let trial_chi2 = chi_squared(data, offset, &trial);
        if trial_chi2 <= chi2 {
            // Accepted: move, soften damping, then test convergence.
            let rel_drop = (chi2 - trial_chi2) / chi2.max(ABSOLUTE_FLOOR);
            let rel_step = (0..3)
                .map(|k| step[k].abs() / params[k].abs().max(1.0))
                .fold(0.0f64, f64::max);
            params = trial;
            chi2 = trial_chi2;
            lambda = (lambda * 0.1).max(LAMBDA_MIN);
            if chi2 == 0.0
                || chi2 < ABSOLUTE_FLOOR
                || rel_drop < REL_OBJECTIVE_TOL
                || rel_step < REL_STEP_TOL
            {
                converged = true;
                break;
            }
        } else {
            lambda *= 10.0;
            if !lambda.is_finite() {
                break;
            }
        }
    }

    if !converged {
        return Err(Error::FitNotConverged {
            cycles: MAX_CYCLES,
            best: params,
            best_objective: chi2,
        });
    }

    // Covariance from the undamped curvature at the optimum.
    let (jtj, _) = normal_equations(data, offset, &params);
    let covariance = jtj.try_inverse().ok_or_else(|| {
        Error::DegenerateData(
            "curvature matrix is singular at the optimum; uncertainties \
             are undefined"
                .into(),
        )
    })?;
    let sigmas: Vec<f64> = (0..3).map(|k| covariance[(k, k)].sqrt()).collect();
    if sigmas.iter().any(|s| !s.is_finite()) {
        return Err(Error::DegenerateData(
            "curvature matrix is not positive definite at the optimum".into(),
        ));
    }

    Ok(LorentzFit {
        amplitude: params[0],
        center_mhz: params[1],
        fwhm_mhz: params[2],
        offset,
        sigma_amplitude: sigmas[0],
        sigma_center_mhz: sigmas[1],
        sigma_fwhm_mhz: sigmas[2],
        chi2_reduced: chi2 / (data.len() - 3) as f64,
    })
}

/// Starting point when the caller gives none: center at the most extreme
/// deviation from the offset, amplitude equal to that signed deviation,
/// width half the spanned detuning range.
fn default_init(data: &[(f64, f64, f64)], offset: f64) -> [f64; 3] {
    let mut best = &data[0];
    for point in data {
        if (point.1 - offset).abs() > (best.1 - offset).abs() {
            best = point;
        }
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for point in data {
        lo = lo.min(point.0);
        hi = hi.max(point.0);
    }
    [best.1 - offset, best.0, (hi - lo) / 2.0]
}

fn chi_squared(data: &[(f64, f64, f64)], offset: f64, params: &[f64; 3]) -> f64 {
    let [amp, center, fwhm] = *params;
    let half = fwhm / 2.0;
    let mut total = 0.0;
    for &(x, y, sigma) in data {
        let d = x - center;
        let model = offset + amp * half * half / (d * d + half * half);
        let residual = (y - model) / sigma;
        total += residual * residual;
    }
    total
}

/// Builds JᵀWJ and JᵀW·r analytically for the three-parameter model.
fn normal_equations(
    data: &[(f64, f64, f64)],
    offset: f64,
    params: &[f64; 3],
) -> (Matrix3<f64>, Vector3<f64>) {
    let [amp, center, fwhm] = *params;
    let half = fwhm / 2.0;
    let mut jtj = Matrix3::zeros();
    let mut jtr = Vector3::zeros();
    for &(x, y, sigma) in data {
        let d = x - center;
        let denom = d * d + half * half;
        let line = half * half / denom;
        let model = offset + amp * line;
        // ∂model/∂A, ∂model/∂Δf₀, ∂model/∂δf (the extra 1/2 from
        // δf = 2·half is already folded into the last entry).
        let grad = [
            line,
            amp * line * 2.0 * d / denom,
            amp * half * d * d / (denom * denom),
        ];
        let weight = 1.0 / (sigma * sigma);
        let residual = y - model;
        for i in 0..3 {
            jtr[i] += weight * grad[i] * residual;
            for j in 0..3 {
                jtj[(i, j)] += weight * grad[i] * grad[j];
            }
        }
    }
    (jtj, jtr)
}
