//! Shared oracles for the test suites: finite-difference gradients and random
//! SPD sampling. Public so integration tests and the benchmark crate's
//! acceptance suite can reuse them; not part of the stable API surface.

use crate::spd::{SpdMatrix, SymMatrix};
use nalgebra::DMatrix;
use rand::Rng;

/// Random SPD matrix `G G^T + 0.1 I` with uniform `G` entries; well-spread
/// spectrum, never near-singular. Deterministic given the generator state.
pub fn random_spd(d: usize, rng: &mut impl Rng) -> SpdMatrix {
    let g = DMatrix::from_fn(d, d, |_, _| rng.random::<f64>() - 0.5);
    let m = &g * g.transpose() + DMatrix::identity(d, d) * 0.1;
    SpdMatrix::new(SymMatrix::new(m)).expect("Gram + ridge is SPD")
}

/// Random symmetric matrix with uniform entries in (-0.5, 0.5).
pub fn random_sym(d: usize, rng: &mut impl Rng) -> SymMatrix {
    SymMatrix::from_fn(d, |_, _| rng.random::<f64>() - 0.5)
}

/// Central finite-difference gradient of a scalar function on the cone.
///
/// Returns `G` in the convention `d phi = tr(G dX)` over symmetric
/// perturbations: off-diagonal pairs are perturbed together, so the measured
/// slope along `E_ij + E_ji` equals `2 G_ij`.
pub fn fd_gradient(f: &dyn Fn(&SpdMatrix) -> f64, x: &SpdMatrix, step: f64) -> SymMatrix {
    let d = x.dim();
    let mut g = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let mut pert = DMatrix::zeros(d, d);
            pert[(i, j)] = 1.0;
            pert[(j, i)] = 1.0;
            let xp = SpdMatrix::assume_spd(SymMatrix::new(x.as_matrix() + &pert * step));
            let xm = SpdMatrix::assume_spd(SymMatrix::new(x.as_matrix() - &pert * step));
            let slope = (f(&xp) - f(&xm)) / (2.0 * step);
            if i == j {
                g[(i, i)] = slope;
            } else {
                g[(i, j)] = 0.5 * slope;
                g[(j, i)] = 0.5 * slope;
            }
        }
    }
    SymMatrix::new(g)
}

/// Directional central finite difference along a symmetric direction.
pub fn fd_directional(f: &dyn Fn(&SpdMatrix) -> f64, x: &SpdMatrix, dir: &SymMatrix, step: f64) -> f64 {
    let xp = SpdMatrix::assume_spd(SymMatrix::new(x.as_matrix() + dir.as_matrix() * step));
    let xm = SpdMatrix::assume_spd(SymMatrix::new(x.as_matrix() - dir.as_matrix() * step));
    (f(&xp) - f(&xm)) / (2.0 * step)
}

/// Randomized verification suites for gauge functions and their induced
/// norms/metrics, shared between the module tests and the acceptance gate.
pub mod gauge_checks {
    use super::{random_spd, SpdMatrix};
    use crate::gauge::{gauge_dist, ui_norm, weakly_submajorized, GaugeFunction};
    use crate::geometry::{geodesic, geometric_mean, riem_dist};
    use crate::spd::SymMatrix;
    use nalgebra::DMatrix;
    use rand::seq::SliceRandom;
    use rand::Rng;
    use rand_chacha::ChaCha12Rng;

    fn random_vec(d: usize, rng: &mut ChaCha12Rng) -> Vec<f64> {
        (0..d).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect()
    }

    fn check(ok: bool, what: &str, detail: String) -> Result<(), String> {
        if ok {
            Ok(())
        } else {
            Err(format!("{what}: {detail}"))
        }
    }

    /// Norm axioms, permutation/sign invariance, monotonicity and strong
    /// isotonicity on random vectors. `tol` is a relative slack (numeric
    /// duals are evaluated by an iterative supremum, exact members pass far
    /// tighter).
    pub fn axiom_suite(
        phi: &GaugeFunction,
        d: usize,
        trials: usize,
        tol: f64,
        rng: &mut ChaCha12Rng,
    ) -> Result<(), String> {
        let eval = |x: &[f64]| phi.eval(x).map_err(|e| e.to_string());
        for t in 0..trials {
            let x = random_vec(d, rng);
            let y = random_vec(d, rng);
            let fx = eval(&x)?;
            let fy = eval(&y)?;
            let slack = |s: f64| tol * (1.0 + s.abs());

            // triangle inequality
            let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            let fsum = eval(&sum)?;
            check(
                fsum <= fx + fy + slack(fx + fy),
                "triangle inequality",
                format!("trial {t}: {fsum} > {fx} + {fy}"),
            )?;

            // absolute homogeneity
            let alpha = rng.random::<f64>() * 4.0 - 2.0;
            let scaled: Vec<f64> = x.iter().map(|v| alpha * v).collect();
            let fscaled = eval(&scaled)?;
            check(
                (fscaled - alpha.abs() * fx).abs() <= slack(fscaled),
                "absolute homogeneity",
                format!("trial {t}: {fscaled} vs {}", alpha.abs() * fx),
            )?;

            // positive definiteness
            check(
                fx > 0.0 || x.iter().all(|v| *v == 0.0),
                "positive definiteness",
                format!("trial {t}: norm {fx} at nonzero input"),
            )?;

            // permutation invariance
            let mut perm: Vec<usize> = (0..d).collect();
            perm.shuffle(rng);
            let permuted: Vec<f64> = perm.iter().map(|&i| x[i]).collect();
            let fperm = eval(&permuted)?;
            check(
                (fperm - fx).abs() <= slack(fx),
                "permutation invariance",
                format!("trial {t}: {fperm} vs {fx}"),
            )?;

            // sign invariance
            let flipped: Vec<f64> =
                x.iter().map(|v| if rng.random::<bool>() { -v } else { *v }).collect();
            let fflip = eval(&flipped)?;
            check(
                (fflip - fx).abs() <= slack(fx),
                "sign invariance",
                format!("trial {t}: {fflip} vs {fx}"),
            )?;

            // monotonicity on dominated nonnegative pairs
            let hi: Vec<f64> = x.iter().map(|v| v.abs() + 0.1).collect();
            let lo: Vec<f64> = hi.iter().map(|v| v * rng.random::<f64>()).collect();
            let fhi = eval(&hi)?;
            let flo = eval(&lo)?;
            check(
                flo <= fhi + slack(fhi),
                "monotonicity",
                format!("trial {t}: {flo} > {fhi}"),
            )?;

            // strong isotonicity: mixing with a permutation weakly submajorizes
            let mixed: Vec<f64> =
                hi.iter().zip(perm.iter()).map(|(v, &i)| 0.5 * v + 0.5 * hi[i]).collect();
            debug_assert!(weakly_submajorized(&mixed, &hi));
            let fmix = eval(&mixed)?;
            check(
                fmix <= fhi + slack(fhi),
                "strong isotonicity",
                format!("trial {t}: {fmix} > {fhi}"),
            )?;
        }
        Ok(())
    }

    /// Midpoint g-convexity of the induced unitarily invariant norm.
    pub fn ui_norm_gconvexity(
        phi: &GaugeFunction,
        d: usize,
        trials: usize,
        tol: f64,
        rng: &mut ChaCha12Rng,
    ) -> Result<(), String> {
        for t in 0..trials {
            let a = random_spd(d, rng);
            let b = random_spd(d, rng);
            let mid = geometric_mean(&a, &b);
            let lhs = ui_norm(phi, &mid).map_err(|e| e.to_string())?;
            let fa = ui_norm(phi, &a).map_err(|e| e.to_string())?;
            let fb = ui_norm(phi, &b).map_err(|e| e.to_string())?;
            let rhs = 0.5 * (fa + fb);
            check(
                lhs <= rhs + tol * (1.0 + rhs.abs()),
                "ui_norm midpoint g-convexity",
                format!("trial {t}: {lhs} > {rhs}"),
            )?;
        }
        Ok(())
    }

    /// Metric axioms of `d_Phi` plus the standard invariances: inversion and
    /// congruence invariance, midpoint halving, geodesic parameter scaling,
    /// and joint geodesic convexity; also midpoint g-convexity of
    /// `d_Phi^alpha(., Z)` for `alpha` in {1, 2}.
    pub fn metric_suite(
        phi: &GaugeFunction,
        d: usize,
        trials: usize,
        tol: f64,
        rng: &mut ChaCha12Rng,
    ) -> Result<(), String> {
        let dist = |a: &SpdMatrix, b: &SpdMatrix| gauge_dist(phi, a, b).map_err(|e| e.to_string());
        for t in 0..trials {
            let a = random_spd(d, rng);
            let b = random_spd(d, rng);
            let c = random_spd(d, rng);
            let dab = dist(&a, &b)?;
            let slack = |s: f64| tol * (1.0 + s.abs());

            check((dist(&b, &a)? - dab).abs() <= slack(dab), "metric symmetry", format!("trial {t}"))?;
            check(dist(&a, &a)? == 0.0, "metric identity", format!("trial {t}"))?;
            check(
                dab <= dist(&a, &c)? + dist(&c, &b)? + slack(dab),
                "metric triangle inequality",
                format!("trial {t}"),
            )?;

            // invariances (Theorem 2.2 item 1)
            let dinv = dist(&a.inverse(), &b.inverse())?;
            check((dinv - dab).abs() <= slack(dab), "inversion invariance", format!("trial {t}: {dinv} vs {dab}"))?;
            let m = DMatrix::from_fn(d, d, |_, _| rng.random::<f64>() - 0.5)
                + DMatrix::identity(d, d) * 2.0;
            let ca = SpdMatrix::new(SymMatrix::new(&m * a.as_matrix() * m.transpose()))
                .map_err(|e| e.to_string())?;
            let cb = SpdMatrix::new(SymMatrix::new(&m * b.as_matrix() * m.transpose()))
                .map_err(|e| e.to_string())?;
            let dcong = dist(&ca, &cb)?;
            check((dcong - dab).abs() <= slack(dab), "congruence invariance", format!("trial {t}: {dcong} vs {dab}"))?;

            // midpoint halving (item 2)
            let mid = geometric_mean(&a, &b);
            let dmid = dist(&mid, &a)?;
            check(
                (dmid - 0.5 * dab).abs() <= slack(dab),
                "midpoint halving",
                format!("trial {t}: {dmid} vs {}", 0.5 * dab),
            )?;

            // geodesic parameter scaling (item 3)
            let (s, u) = (rng.random::<f64>(), rng.random::<f64>());
            let gs = geodesic(&a, &b, s).map_err(|e| e.to_string())?;
            let gu = geodesic(&a, &b, u).map_err(|e| e.to_string())?;
            let dsu = dist(&gs, &gu)?;
            check(
                (dsu - (s - u).abs() * dab).abs() <= slack(dab),
                "geodesic parameter scaling",
                format!("trial {t}: {dsu} vs {}", (s - u).abs() * dab),
            )?;

            // joint convexity along pairs of geodesics (item 4)
            let dd = random_spd(d, rng);
            let t_par = rng.random::<f64>();
            let g1 = geodesic(&a, &b, t_par).map_err(|e| e.to_string())?;
            let g2 = geodesic(&c, &dd, t_par).map_err(|e| e.to_string())?;
            let lhs = dist(&g1, &g2)?;
            let rhs = (1.0 - t_par) * dist(&a, &c)? + t_par * dist(&b, &dd)?;
            check(
                lhs <= rhs + slack(rhs),
                "joint geodesic convexity",
                format!("trial {t}: {lhs} > {rhs}"),
            )?;

            // g-convexity of d_Phi^alpha(., c)
            for alpha in [1.0, 2.0] {
                let f = |x: &SpdMatrix| dist(x, &c).map(|v| v.powf(alpha));
                let lhs = f(&mid)?;
                let rhs = 0.5 * (f(&a)? + f(&b)?);
                check(
                    lhs <= rhs + slack(rhs),
                    "g-convexity of d_Phi^alpha",
                    format!("trial {t}, alpha {alpha}: {lhs} > {rhs}"),
                )?;
            }
        }
        Ok(())
    }

    /// The Schatten-2 specialization of the gauge metric is the Riemannian
    /// affine-invariant distance.
    pub fn schatten2_is_riemannian(
        d: usize,
        trials: usize,
        tol: f64,
        rng: &mut ChaCha12Rng,
    ) -> Result<(), String> {
        let s2 = GaugeFunction::schatten(2.0);
        for t in 0..trials {
            let a = random_spd(d, rng);
            let b = random_spd(d, rng);
            let lhs = gauge_dist(&s2, &a, &b).map_err(|e| e.to_string())?;
            let rhs = riem_dist(&a, &b);
            if (lhs - rhs).abs() > tol * (1.0 + rhs) {
                return Err(format!("trial {t}: gauge dist {lhs} vs riemannian {rhs}"));
            }
        }
        Ok(())
    }
}
