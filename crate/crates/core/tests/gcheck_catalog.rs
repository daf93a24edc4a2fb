//! The certifier on the named regularizers and likelihood objectives: every
//! catalog entry gets its expected labels and survives the randomized numeric
//! audit; the two known counterexamples stay uncertified.

use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use spdreg_core::gcheck::{catalog, certify, numeric_audit, ECurvature, GCurvature};
use spdreg_core::testkit::random_spd;

const AUDIT_D: usize = 6;
const AUDIT_TRIALS: usize = 1000;

fn samples(n: usize, d: usize, rng: &mut ChaCha12Rng) -> Vec<DVector<f64>> {
    (0..n).map(|_| DVector::from_fn(d, |_, _| rng.random::<f64>() * 2.0 - 1.0)).collect()
}

#[test]
fn named_regularizers_get_paper_verdicts_and_pass_audit() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xCA7);
    let anchor = random_spd(AUDIT_D, &mut rng);
    let xs = samples(8, AUDIT_D, &mut rng);

    struct Case {
        name: &'static str,
        expr: spdreg_core::gcheck::CurvatureExpr,
        want_gconvex: bool,
        want_dc: bool,
        want_econvex: bool,
    }
    let cases = vec![
        Case {
            name: "trace",
            expr: catalog::trace_reg(),
            want_gconvex: true,
            want_dc: true,
            want_econvex: true,
        },
        Case {
            name: "log-det barrier",
            expr: catalog::log_det_barrier(),
            want_gconvex: true, // g-linear
            want_dc: true,
            want_econvex: false,
        },
        Case {
            name: "ky-fan top-k power",
            expr: catalog::ky_fan_top_k_power(2, 2.0),
            want_gconvex: true,
            want_dc: true,
            want_econvex: true,
        },
        Case {
            name: "exp-trace",
            expr: catalog::exp_trace(),
            want_gconvex: true,
            want_dc: true,
            want_econvex: true,
        },
        Case {
            name: "smooth schatten p=4",
            expr: catalog::smooth_schatten(4.0, 0.3, AUDIT_D),
            want_gconvex: true,
            want_dc: true,
            want_econvex: true,
        },
        Case {
            name: "s-divergence ball",
            expr: catalog::s_div_ball(anchor.clone(), 0.8),
            want_gconvex: true,
            want_dc: true,
            want_econvex: false,
        },
        Case {
            name: "diagonal loading",
            expr: catalog::diagonal_loading(0.6),
            want_gconvex: true,
            want_dc: true,
            want_econvex: false,
        },
        Case {
            name: "tyler",
            expr: catalog::tyler(&xs),
            want_gconvex: true,
            want_dc: true,
            want_econvex: false,
        },
        Case {
            name: "tyler + diagonal loading",
            expr: catalog::tyler_diag_loading(&xs, 0.6),
            want_gconvex: true,
            want_dc: true,
            want_econvex: false,
        },
        Case {
            name: "gaussian optimistic",
            expr: catalog::gaussian_optimistic(
                random_spd(AUDIT_D, &mut rng).sym().clone(),
                anchor.clone(),
                1.2,
            ),
            want_gconvex: true,
            want_dc: true,
            want_econvex: false,
        },
        Case {
            name: "kotz (shape 2)",
            expr: catalog::kotz(&xs, 1.1, 1.5, 2.0, ),
            want_gconvex: true,
            want_dc: true,
            want_econvex: false,
        },
        Case {
            name: "kotz (shape 0.5)",
            expr: catalog::kotz(&xs, 1.1, 1.5, 0.5),
            want_gconvex: true,
            want_dc: true,
            want_econvex: false,
        },
        Case {
            name: "multivariate t",
            expr: catalog::mvt(&xs, 5.0),
            want_gconvex: true,
            want_dc: true,
            want_econvex: false,
        },
        Case {
            name: "log-normal",
            expr: catalog::lognormal(random_spd(AUDIT_D, &mut rng).sym().clone(), 8),
            want_gconvex: true,
            want_dc: true,
            want_econvex: false,
        },
        Case {
            name: "square root",
            expr: catalog::sqrt_objective(anchor.clone()),
            want_gconvex: true,
            want_dc: true,
            want_econvex: false,
        },
        Case {
            name: "karcher",
            expr: catalog::karcher(
                &[random_spd(AUDIT_D, &mut rng), random_spd(AUDIT_D, &mut rng)],
                None,
            ),
            want_gconvex: true,
            want_dc: true,
            want_econvex: false,
        },
    ];

    for (i, case) in cases.iter().enumerate() {
        case.expr
            .validate(AUDIT_D)
            .unwrap_or_else(|e| panic!("{}: invalid expression: {e}", case.name));
        let cert = certify(&case.expr);
        assert_eq!(
            cert.verdict.g_curvature.is_convex(),
            case.want_gconvex,
            "{}: geodesic label {:?}",
            case.name,
            cert.verdict.g_curvature
        );
        assert_eq!(cert.verdict.is_dc(), case.want_dc, "{}: DC label", case.name);
        assert_eq!(
            cert.verdict.e_curvature.is_convex(),
            case.want_econvex,
            "{}: euclidean label {:?}",
            case.name,
            cert.verdict.e_curvature
        );
        assert!(!cert.proof.is_empty(), "{}: empty proof trace", case.name);

        let audit = numeric_audit(&case.expr, &cert.verdict, AUDIT_TRIALS, AUDIT_D, 77 + i as u64);
        assert!(audit.passed, "{} failed audit: {:?}", case.name, audit.failures);
    }
}

#[test]
fn counterexamples_are_never_certified() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xBAD);

    // entrywise l1 is Euclidean convex but carries no geodesic certificate
    let l1 = catalog::entrywise_l1();
    let cert = certify(&l1);
    assert_eq!(cert.verdict.g_curvature, GCurvature::Unknown);
    assert_eq!(cert.verdict.e_curvature, ECurvature::EConvex);
    let audit = numeric_audit(&l1, &cert.verdict, AUDIT_TRIALS, AUDIT_D, 5);
    assert!(audit.passed, "{:?}", audit.failures);

    // sum of log quadratic forms is g-convex but never labeled e-convex
    let ys = samples(5, AUDIT_D, &mut rng);
    let slq = catalog::sum_log_quad(&ys);
    let cert = certify(&slq);
    assert!(cert.verdict.g_curvature.is_convex());
    assert!(!cert.verdict.e_curvature.is_convex());
    let audit = numeric_audit(&slq, &cert.verdict, AUDIT_TRIALS, AUDIT_D, 6);
    assert!(audit.passed, "{:?}", audit.failures);
}

#[test]
fn audit_calls_out_fabricated_verdicts() {
    use spdreg_core::gcheck::{CurvatureExpr, Verdict};
    let neg_trace = CurvatureExpr::Negate(Box::new(CurvatureExpr::Trace));
    let fake = Verdict {
        g_curvature: GCurvature::GConvex,
        e_curvature: ECurvature::EConvex,
        dc_split: None,
    };
    let audit = numeric_audit(&neg_trace, &fake, 200, AUDIT_D, 9);
    assert!(!audit.passed);
    assert!(!audit.failures.is_empty());
}
