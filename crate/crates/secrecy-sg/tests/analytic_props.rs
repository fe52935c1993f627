//! Closed-form cross-checks: every mean must equal the quadrature of its own
//! CCDF, and the distributional invariants must hold over random parameters.

mod common;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use common::integrate_ccdf_over_thresholds;
use secrecy_sg::analytic::{
    ccdf_s1, ccdf_s2_lower, ccdf_s2_upper_pgfl, ccdf_s2_upper_voronoi, ccdf_s3_cell_lower,
    ccdf_s3_radius, mean_s1, mean_s2_upper, mean_s3_cell_lower, mean_s3_radius,
    NetworkParams, SnrMode, Threshold,
};
use secrecy_sg::specfun::CellAreaLaw;

fn params(lambda_bs: f64, lambda_e: f64, alpha: f64) -> NetworkParams {
    NetworkParams::new(lambda_bs, lambda_e, alpha, SnrMode::High).unwrap()
}

fn t(r0: f64) -> Threshold {
    Threshold::new(r0).unwrap()
}

const PARAM_GRID: [(f64, f64, f64); 5] = [
    (1.0, 1.0, 4.0),
    (1.0, 0.1, 4.0),
    (1.0, 10.0, 2.5),
    (3.0, 0.7, 3.2),
    (0.2, 2.0, 6.0),
];

#[test]
fn s1_mean_equals_quadrature_of_its_ccdf() {
    for &(lb, le, alpha) in &PARAM_GRID {
        let p = params(lb, le, alpha);
        let by_quadrature =
            integrate_ccdf_over_thresholds(&|r0| ccdf_s1(&p, &t(r0)), alpha);
        let closed = mean_s1(&p);
        assert!(
            (by_quadrature - closed).abs() <= 1e-6 * closed.abs(),
            "scenario 1 at ({lb},{le},{alpha}): {by_quadrature} vs {closed}"
        );
    }
}

#[test]
fn s2_upper_mean_equals_quadrature_of_the_pgfl_bound() {
    for &(lb, le, alpha) in &PARAM_GRID {
        let p = params(lb, le, alpha);
        let by_quadrature =
            integrate_ccdf_over_thresholds(&|r0| ccdf_s2_upper_pgfl(&p, &t(r0)), alpha);
        let closed = mean_s2_upper(&p);
        assert!(
            (by_quadrature - closed).abs() <= 1e-6 * closed.abs(),
            "scenario 2 upper at ({lb},{le},{alpha}): {by_quadrature} vs {closed}"
        );
    }
}

#[test]
fn s3_cell_mean_bound_equals_quadrature_of_its_ccdf_bound() {
    for &(lb, le, alpha) in &PARAM_GRID {
        let p = params(lb, le, alpha);
        let by_quadrature =
            integrate_ccdf_over_thresholds(&|r0| ccdf_s3_cell_lower(&p, &t(r0)), alpha);
        let closed = mean_s3_cell_lower(&p);
        assert!(
            (by_quadrature - closed).abs() <= 1e-6 * closed.abs(),
            "scenario 3 cell at ({lb},{le},{alpha}): {by_quadrature} vs {closed}"
        );
    }
}

#[test]
fn s3_radius_mean_equals_quadrature_of_its_ccdf() {
    for &(lb, le, alpha) in &PARAM_GRID {
        for &d0 in &[0.5, 1.0, 2.0] {
            let p = params(lb, le, alpha);
            let by_quadrature = integrate_ccdf_over_thresholds(
                &|r0| ccdf_s3_radius(&p, &t(r0), d0).unwrap(),
                alpha,
            );
            let closed = mean_s3_radius(&p, d0).unwrap();
            assert!(
                (by_quadrature - closed).abs() <= 1e-6 * closed.abs(),
                "scenario 3 radius at ({lb},{le},{alpha},{d0}): {by_quadrature} vs {closed}"
            );
        }
    }
}

#[test]
fn s3_radius_mean_frozen_point() {
    // Frozen from the quadrature oracle over the exact CCDF.
    let p = params(1.0, 0.1, 4.0);
    let by_quadrature =
        integrate_ccdf_over_thresholds(&|r0| ccdf_s3_radius(&p, &t(r0), 2.0).unwrap(), 4.0);
    assert_abs_diff_eq!(by_quadrature, 6.500_767_014, epsilon = 1e-6);
    assert_abs_diff_eq!(mean_s3_radius(&p, 2.0).unwrap(), by_quadrature, epsilon = 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ccdfs_live_in_the_unit_interval_and_decrease_in_r0(
        lb in 0.05f64..20.0,
        le in 0.05f64..20.0,
        alpha in 2.01f64..8.0,
        r0a in 0.0f64..12.0,
        dr in 0.0f64..8.0,
        d0 in 0.0f64..6.0,
    ) {
        let p = params(lb, le, alpha);
        let law = CellAreaLaw::default();
        let (ta, tb) = (t(r0a), t(r0a + dr));
        let pairs = [
            (ccdf_s1(&p, &ta), ccdf_s1(&p, &tb)),
            (ccdf_s2_upper_pgfl(&p, &ta), ccdf_s2_upper_pgfl(&p, &tb)),
            (ccdf_s2_upper_voronoi(&p, &ta, &law), ccdf_s2_upper_voronoi(&p, &tb, &law)),
            (ccdf_s3_cell_lower(&p, &ta), ccdf_s3_cell_lower(&p, &tb)),
            (
                ccdf_s3_radius(&p, &ta, d0).unwrap(),
                ccdf_s3_radius(&p, &tb, d0).unwrap(),
            ),
        ];
        for (va, vb) in pairs {
            prop_assert!((0.0..=1.0).contains(&va));
            prop_assert!((0.0..=1.0).contains(&vb));
            prop_assert!(vb <= va + 1e-15, "CCDF must not increase with the threshold");
        }
    }

    #[test]
    fn ccdfs_decrease_in_eavesdropper_density(
        lb in 0.05f64..20.0,
        le in 0.05f64..20.0,
        factor in 1.0f64..50.0,
        alpha in 2.01f64..8.0,
        r0 in 0.0f64..10.0,
        d0 in 0.0f64..6.0,
    ) {
        let sparse = params(lb, le, alpha);
        let dense = params(lb, le * factor, alpha);
        let th = t(r0);
        prop_assert!(ccdf_s1(&dense, &th) <= ccdf_s1(&sparse, &th) + 1e-15);
        prop_assert!(
            ccdf_s2_upper_pgfl(&dense, &th) <= ccdf_s2_upper_pgfl(&sparse, &th) + 1e-15
        );
        prop_assert!(
            ccdf_s3_cell_lower(&dense, &th) <= ccdf_s3_cell_lower(&sparse, &th) + 1e-15
        );
        prop_assert!(
            ccdf_s3_radius(&dense, &th, d0).unwrap()
                <= ccdf_s3_radius(&sparse, &th, d0).unwrap() + 1e-15
        );
    }

    #[test]
    fn scenario_ordering_holds_pointwise(
        lb in 0.05f64..20.0,
        le in 0.05f64..20.0,
        alpha in 2.01f64..8.0,
        r0 in 0.0f64..10.0,
        d0 in 0.0f64..6.0,
    ) {
        let p = params(lb, le, alpha);
        let th = t(r0);
        let s1 = ccdf_s1(&p, &th);
        prop_assert!(ccdf_s3_cell_lower(&p, &th) <= s1 + 1e-15);
        prop_assert_eq!(ccdf_s2_lower(&p, &th), s1);
        prop_assert!(s1 <= ccdf_s2_upper_pgfl(&p, &th) + 1e-15);
        prop_assert!(ccdf_s3_radius(&p, &th, d0).unwrap() <= s1 + 1e-15);
    }

    #[test]
    fn densities_only_enter_through_their_ratio(
        lb in 0.05f64..20.0,
        le in 0.05f64..20.0,
        scale in 0.1f64..10.0,
        alpha in 2.01f64..8.0,
        r0 in 0.0f64..10.0,
        d0 in 0.01f64..6.0,
    ) {
        let p = params(lb, le, alpha);
        let scaled = params(lb * scale, le * scale, alpha);
        let th = t(r0);
        let tol = 1e-12;
        prop_assert!((ccdf_s1(&p, &th) - ccdf_s1(&scaled, &th)).abs() <= tol);
        prop_assert!(
            (ccdf_s2_upper_pgfl(&p, &th) - ccdf_s2_upper_pgfl(&scaled, &th)).abs() <= tol
        );
        prop_assert!(
            (ccdf_s3_cell_lower(&p, &th) - ccdf_s3_cell_lower(&scaled, &th)).abs() <= tol
        );
        // The detection radius re-scales with distance, i.e. by 1/sqrt(c).
        let a = ccdf_s3_radius(&p, &th, d0).unwrap();
        let b = ccdf_s3_radius(&scaled, &th, d0 / scale.sqrt()).unwrap();
        prop_assert!((a - b).abs() <= tol);
    }

    #[test]
    fn s2_means_bracket_correctly(
        lb in 0.05f64..20.0,
        le in 0.05f64..20.0,
        alpha in 2.01f64..8.0,
    ) {
        let p = params(lb, le, alpha);
        prop_assert!(mean_s1(&p) <= mean_s2_upper(&p) + 1e-12);
        prop_assert!(mean_s3_cell_lower(&p) <= mean_s1(&p) + 1e-12);
    }
}
