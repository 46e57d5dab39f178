//! Property-based and grid checks of the incomplete-gamma kernel against
//! its defining identities and the independent quadrature oracle.

use focusqed::specfun::oracle::quadrature_oracle_gamma;
use focusqed::specfun::{scaled_upper_gamma, upper_gamma};
use proptest::prelude::*;

/// Kernel vs quadrature oracle over the standard grid: six orders and
/// twenty log-spaced arguments spanning [1e-2, 1e2].
#[test]
fn kernel_matches_quadrature_oracle_on_grid() {
    let orders = [-0.25, 0.25, 0.5, 0.75, 1.0, 1.5];
    for &s in &orders {
        for k in 0..20 {
            let x = 10f64.powf(-2.0 + 4.0 * k as f64 / 19.0);
            let oracle = quadrature_oracle_gamma(s, x, 1e-12).unwrap();
            let kernel = upper_gamma(s, x).unwrap();
            let relative = ((kernel - oracle) / oracle).abs();
            assert!(
                relative <= 1e-11,
                "kernel/oracle disagree at s={s}, x={x}: {kernel} vs {oracle} (rel {relative:.3e})"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    /// Γ(s+1, x) = s·Γ(s, x) + x^s e^(−x), checked in the scaled form
    /// e^x·Γ(s+1, x) = s·e^x·Γ(s, x) + x^s.
    #[test]
    fn recurrence_residual_stays_small(s in -0.9f64..2.0, x in 0.01f64..100.0) {
        // The kernel rejects non-positive integer orders; stay clear of
        // the s = 0 pole (s = −1 is outside the sampled range).
        prop_assume!(s.abs() >= 1e-3);
        let lhs = scaled_upper_gamma(s + 1.0, x).unwrap();
        let rhs = s * scaled_upper_gamma(s, x).unwrap() + x.powf(s);
        prop_assert!(
            (lhs - rhs).abs() <= 1e-11 * lhs.abs(),
            "recurrence residual too large at s={}, x={}: lhs={}, rhs={}",
            s, x, lhs, rhs
        );
    }

    /// The scaled and direct forms agree wherever both are finite.
    #[test]
    fn scaled_and_direct_forms_are_consistent(s in -0.9f64..2.0, x in 0.01f64..650.0) {
        prop_assume!(s.abs() >= 1e-3);
        let direct = upper_gamma(s, x).unwrap();
        let scaled = scaled_upper_gamma(s, x).unwrap();
        let recombined = x.exp() * direct;
        prop_assert!(
            (recombined - scaled).abs() <= 1e-12 * scaled.abs(),
            "scaling inconsistency at s={}, x={}: e^x·direct={} vs scaled={}",
            s, x, recombined, scaled
        );
    }

    /// Γ(s, x) is strictly decreasing in x (its integrand is positive).
    #[test]
    fn upper_gamma_strictly_decreases_in_x(
        s in -0.9f64..2.0,
        x1 in 0.01f64..300.0,
        factor in 1.001f64..2.0,
    ) {
        // x2 stays below ~600, inside the direct form's underflow guard.
        prop_assume!(s.abs() >= 1e-3);
        let x2 = x1 * factor;
        let lo = upper_gamma(s, x2).unwrap();
        let hi = upper_gamma(s, x1).unwrap();
        prop_assert!(
            lo < hi,
            "monotonicity violated at s={}: gamma({},{}) = {} !< gamma({},{}) = {}",
            s, s, x2, lo, s, x1, hi
        );
    }

    /// The oracle itself honors its error contract at looser tolerances,
    /// tested against the tight-tolerance value.
    #[test]
    fn oracle_tolerance_scaling(exp_tol in -14f64..-6.0) {
        let tol = 10f64.powf(exp_tol).max(1e-14);
        let loose = quadrature_oracle_gamma(0.25, 1.0, tol).unwrap();
        let tight = quadrature_oracle_gamma(0.25, 1.0, 1e-13).unwrap();
        prop_assert!(((loose - tight) / tight).abs() <= tol * 4.0);
    }
}
