//! Property-based and structural checks of the focusing→scattering map:
//! inversion round trips, channel cross-identities, unimodality, and the
//! small-focusing asymptote.

use focusqed::focus::{
    effective_focusing_from_ratio, extinction, ratio_from_extinction, ratio_from_reflectivity,
    reflectivity, scattering_ratio, scattering_ratio_maximum,
};
use proptest::prelude::*;

/// The scattering ratio rises to a single interior maximum and falls
/// beyond it: the finite-difference slope over a fine grid changes sign
/// exactly once, from positive to negative.
#[test]
fn scattering_ratio_is_unimodal_on_fine_grid() {
    let step = 1e-3;
    let values: Vec<f64> = (1..=5000)
        .map(|i| scattering_ratio(i as f64 * step).unwrap())
        .collect();
    let mut down_transitions = 0;
    let mut up_transitions = 0;
    let mut previous_sign = 0i8;
    for pair in values.windows(2) {
        let diff = pair[1] - pair[0];
        let sign = if diff > 0.0 {
            1
        } else if diff < 0.0 {
            -1
        } else {
            continue;
        };
        if previous_sign == 1 && sign == -1 {
            down_transitions += 1;
        }
        if previous_sign == -1 && sign == 1 {
            up_transitions += 1;
        }
        previous_sign = sign;
    }
    assert_eq!(down_transitions, 1, "expected exactly one maximum");
    assert_eq!(up_transitions, 0, "no local minimum expected");
}

/// Below-threshold focusing follows the quadratic law R_sc → 3u².
#[test]
fn small_focusing_follows_quadratic_law() {
    let u = 1e-3;
    let ratio = scattering_ratio(u).unwrap();
    let law = 3.0 * u * u;
    assert!(
        (ratio / law - 1.0).abs() <= 0.01,
        "R_sc({u}) = {ratio} deviates more than 1% from 3u² = {law}"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    /// Inverting the scattering ratio on the rising branch recovers the
    /// focusing strength.
    #[test]
    fn focusing_round_trips_through_the_ratio(u in 0.05f64..2.18) {
        let ratio = scattering_ratio(u).unwrap();
        let recovered = effective_focusing_from_ratio(ratio).unwrap();
        prop_assert!(
            ((recovered - u) / u).abs() <= 1e-8,
            "round trip drifted: u={} -> ratio={} -> u'={}",
            u, ratio, recovered
        );
    }

    /// Extinction and reflectivity derive from one ratio; eliminating it
    /// gives R = (1 − √(1 − ext))², and the pair inversions agree.
    #[test]
    fn channel_cross_identity_holds(u in 0.1f64..5.0) {
        let ratio = scattering_ratio(u).unwrap();
        let ext = extinction(ratio).unwrap();
        let refl = reflectivity(ratio).unwrap();
        let reconstructed = {
            let half = 1.0 - (1.0 - ext).sqrt();
            half * half
        };
        prop_assert!(
            (reconstructed - refl).abs() <= 1e-10 * refl.max(1e-300),
            "cross-identity violated at u={}: {} vs {}",
            u, reconstructed, refl
        );

        let from_ext = ratio_from_extinction(ext).unwrap();
        let from_refl = ratio_from_reflectivity(refl).unwrap();
        prop_assert!(((from_ext - ratio) / ratio).abs() <= 1e-10);
        prop_assert!(((from_refl - ratio) / ratio).abs() <= 1e-10);
    }

    /// No sampled point may exceed the computed global maximum.
    #[test]
    fn no_point_beats_the_computed_maximum(u in 0.001f64..10.0) {
        let maximum = scattering_ratio_maximum().unwrap();
        let ratio = scattering_ratio(u).unwrap();
        prop_assert!(
            ratio <= maximum.value * (1.0 + 1e-12),
            "R_sc({}) = {} exceeds claimed maximum {} at u* = {}",
            u, ratio, maximum.value, maximum.u
        );
    }
}
