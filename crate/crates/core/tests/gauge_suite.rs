//! Randomized verification of the gauge-function catalog: norm axioms,
//! invariances, isotonicity, induced-norm geodesic convexity, and the metric
//! properties of `d_Phi`.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use spdreg_core::gauge::{gauge_dual, lp_transform, GaugeFunction, SCHATTEN_INF};
use spdreg_core::testkit::gauge_checks;

const D: usize = 5;

/// (name, gauge, relative tolerance) — numeric-dual members get a looser
/// slack since their evaluation is an iterative supremum.
fn catalog() -> Vec<(&'static str, GaugeFunction, f64)> {
    let s1 = GaugeFunction::schatten(1.0);
    let s2 = GaugeFunction::schatten(2.0);
    vec![
        ("schatten-1", s1.clone(), 1e-9),
        ("schatten-1.5", GaugeFunction::schatten(1.5), 1e-9),
        ("schatten-2", s2.clone(), 1e-9),
        ("schatten-3", GaugeFunction::schatten(3.0), 1e-9),
        ("schatten-inf", GaugeFunction::schatten(SCHATTEN_INF), 1e-9),
        ("kyfan-1", GaugeFunction::ky_fan(1), 1e-9),
        ("kyfan-2", GaugeFunction::ky_fan(2), 1e-9),
        ("kyfan-d", GaugeFunction::ky_fan(D), 1e-9),
        ("scaled", GaugeFunction::scaled(0.5, s2.clone()), 1e-9),
        ("sum", GaugeFunction::sum(vec![s1.clone(), GaugeFunction::ky_fan(2)]), 1e-9),
        ("lp2-of-s1", lp_transform(s1.clone(), 2.0).unwrap(), 1e-9),
        ("lp3-of-kyfan2", lp_transform(GaugeFunction::ky_fan(2), 3.0).unwrap(), 1e-9),
        ("dual-s1", gauge_dual(s1.clone()), 1e-9),
        ("dual-s3", gauge_dual(GaugeFunction::schatten(3.0)), 1e-9),
        ("dual-kyfan2", gauge_dual(GaugeFunction::ky_fan(2)), 1e-6),
        (
            "dual-sum",
            gauge_dual(GaugeFunction::sum(vec![s1, GaugeFunction::schatten(SCHATTEN_INF)])),
            1e-6,
        ),
    ]
}

#[test]
fn norm_axioms_hold_across_catalog() {
    for (name, phi, tol) in catalog() {
        let mut rng = ChaCha12Rng::seed_from_u64(0xAC5E);
        let trials = 1000;
        gauge_checks::axiom_suite(&phi, D, trials, tol, &mut rng)
            .unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn induced_norms_are_midpoint_gconvex() {
    for (name, phi, tol) in catalog() {
        let mut rng = ChaCha12Rng::seed_from_u64(0x6C0);
        // the eigenvalue path is shared; keep the heavier numeric duals at a
        // smaller count
        let trials = if tol > 1e-8 { 250 } else { 1000 };
        gauge_checks::ui_norm_gconvexity(&phi, D, trials, tol.max(1e-10), &mut rng)
            .unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn gauge_metrics_satisfy_axioms_and_invariances() {
    for (name, phi, tol) in catalog() {
        let mut rng = ChaCha12Rng::seed_from_u64(0xD157);
        let trials = if tol > 1e-8 { 60 } else { 200 };
        gauge_checks::metric_suite(&phi, D, trials, tol.max(1e-8), &mut rng)
            .unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn schatten2_metric_is_the_riemannian_distance() {
    let mut rng = ChaCha12Rng::seed_from_u64(0x5CA);
    gauge_checks::schatten2_is_riemannian(D, 300, 1e-8, &mut rng).unwrap();
}

// random expression trees: closure under the algebra really does produce
// norms
fn arb_gauge(depth: u32) -> BoxedStrategy<GaugeFunction> {
    let leaf = prop_oneof![
        (1.0f64..4.0).prop_map(GaugeFunction::schatten),
        Just(GaugeFunction::schatten(1.0)),
        Just(GaugeFunction::schatten(SCHATTEN_INF)),
        (1usize..=D).prop_map(GaugeFunction::ky_fan),
    ];
    leaf.prop_recursive(depth, 16, 3, |inner| {
        prop_oneof![
            ((0.1f64..3.0), inner.clone())
                .prop_map(|(a, g)| GaugeFunction::scaled(a, g)),
            prop::collection::vec(inner.clone(), 1..3).prop_map(GaugeFunction::sum),
            ((1.0f64..3.0), inner).prop_map(|(p, g)| lp_transform(g, p).unwrap()),
        ]
    })
    .boxed()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_trees_satisfy_norm_axioms(
        phi in arb_gauge(3),
        x in prop::collection::vec(-3.0f64..3.0, D),
        y in prop::collection::vec(-3.0f64..3.0, D),
        alpha in -2.0f64..2.0,
    ) {
        let fx = phi.eval(&x).unwrap();
        let fy = phi.eval(&y).unwrap();
        let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let fsum = phi.eval(&sum).unwrap();
        prop_assert!(fsum <= fx + fy + 1e-9 * (1.0 + fx + fy));

        let scaled: Vec<f64> = x.iter().map(|v| alpha * v).collect();
        let fscaled = phi.eval(&scaled).unwrap();
        prop_assert!((fscaled - alpha.abs() * fx).abs() <= 1e-9 * (1.0 + fscaled));

        if x.iter().any(|v| *v != 0.0) {
            prop_assert!(fx > 0.0);
        }
    }
}
