//! Solvers: the generic CCCP loop (closed-form oracle or inner gradient
//! descent on the surrogate), the square-root and Karcher fixed-point
//! specializations, and Riemannian gradient-descent / conjugate-gradient
//! baselines with Armijo backtracking.
//!
//! All solvers emit a [`SolverTrace`] with per-outer-iteration wall time,
//! objective value, optional Frobenius distance to a reference point, and an
//! optional gradient norm.

use crate::geometry::{exp_map, parallel_transport, riem_grad, TangentVector};
use crate::objectives::DcObjective;
use crate::spd::{is_pd, SpdMatrix, SymMatrix};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("line search failed to find an acceptable step after {backtracks} backtracks at iteration {iter}")]
    LineSearchFailed {
        iter: usize,
        backtracks: usize,
        /// Iterate and trace up to the failure, so a stalled run can still be
        /// reported.
        partial: Option<Box<(SpdMatrix, SolverTrace)>>,
    },
    #[error(transparent)]
    Objective(#[from] crate::objectives::ObjectiveError),
}

impl SolverError {
    /// Recover the partial run from a stalled line search.
    pub fn into_partial(self) -> Option<(SpdMatrix, SolverTrace)> {
        match self {
            SolverError::LineSearchFailed { partial: Some(p), .. } => Some(*p),
            _ => None,
        }
    }
}

/// Inner-loop step rule for surrogate minimization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepRule {
    Fixed(f64),
    Backtracking,
}

/// Configuration of the generic CCCP loop.
#[derive(Clone, Debug)]
pub struct CccpConfig {
    /// Outer iterations K.
    pub outer_iters: usize,
    /// Inner gradient steps L per outer iteration (ignored on the oracle path).
    pub inner_iters: usize,
    pub inner_step: StepRule,
    /// Stop when `||x_{k+1} - x_k||_F / ||x_k||_F` drops below this.
    pub outer_tol: f64,
    /// Inner stop on the surrogate gradient norm, relative to its value at
    /// the expansion point.
    pub inner_tol: f64,
}

impl Default for CccpConfig {
    fn default() -> Self {
        CccpConfig {
            outer_iters: 200,
            inner_iters: 50,
            inner_step: StepRule::Backtracking,
            outer_tol: 1e-10,
            inner_tol: 1e-6,
        }
    }
}

/// Armijo backtracking parameters shared by the Riemannian baselines and the
/// CCCP inner loop.
#[derive(Clone, Copy, Debug)]
pub struct LineSearchConfig {
    /// Sufficient-decrease constant in (0, 1).
    pub c1: f64,
    /// Step shrink factor in (0, 1).
    pub shrink: f64,
    pub initial_step: f64,
    pub max_backtracks: usize,
}

impl Default for LineSearchConfig {
    fn default() -> Self {
        LineSearchConfig { c1: 1e-4, shrink: 0.5, initial_step: 1.0, max_backtracks: 50 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub iter: usize,
    pub wall_seconds: f64,
    pub objective: f64,
    pub dist_to_ref: Option<f64>,
    pub grad_norm: Option<f64>,
}

/// Per-iteration record shared by all solvers. Iterations are strictly
/// increasing and wall time nondecreasing.
#[derive(Clone, Debug, Default)]
pub struct SolverTrace {
    pub records: Vec<TraceRecord>,
}

impl SolverTrace {
    pub fn push(&mut self, rec: TraceRecord) {
        if let Some(last) = self.records.last() {
            assert!(rec.iter > last.iter, "trace iterations must strictly increase");
            assert!(
                rec.wall_seconds >= last.wall_seconds,
                "trace wall clock must be nondecreasing"
            );
        }
        self.records.push(rec);
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    pub fn objectives(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.objective)
    }

    pub fn final_objective(&self) -> f64 {
        self.records.last().map_or(f64::NAN, |r| r.objective)
    }

    pub fn total_wall_seconds(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.wall_seconds)
    }

    /// Largest objective increase between consecutive records (negative when
    /// strictly decreasing throughout).
    pub fn max_increase(&self) -> f64 {
        self.records
            .windows(2)
            .map(|w| w[1].objective - w[0].objective)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn dist_to(reference: Option<&SpdMatrix>, x: &SpdMatrix) -> Option<f64> {
    reference.map(|r| (x.as_matrix() - r.as_matrix()).norm())
}

/// Generic convex-concave procedure on a [`DcObjective`].
///
/// With a closed-form oracle each outer step applies it once; otherwise the
/// surrogate `Q(., x_k)` is minimized by `inner_iters` gradient steps with
/// SPD-preserving step control. The objective sequence is nonincreasing up to
/// the inner-solve tolerance.
pub fn cccp(
    obj: &DcObjective,
    x0: &SpdMatrix,
    cfg: &CccpConfig,
    reference: Option<&SpdMatrix>,
) -> Result<(SpdMatrix, SolverTrace), SolverError> {
    let clock = Instant::now();
    let mut trace = SolverTrace::default();
    let mut x = x0.clone();
    trace.push(TraceRecord {
        iter: 0,
        wall_seconds: clock.elapsed().as_secs_f64(),
        objective: obj.value(&x),
        dist_to_ref: dist_to(reference, &x),
        grad_norm: None,
    });
    for k in 1..=cfg.outer_iters {
        let next = match obj.oracle() {
            Some(oracle) => oracle(&x),
            None => inner_descent(obj, &x, cfg, k)?,
        };
        let rel_change = (next.as_matrix() - x.as_matrix()).norm() / x.frob_norm().max(1e-300);
        x = next;
        trace.push(TraceRecord {
            iter: k,
            wall_seconds: clock.elapsed().as_secs_f64(),
            objective: obj.value(&x),
            dist_to_ref: dist_to(reference, &x),
            grad_norm: None,
        });
        if rel_change < cfg.outer_tol {
            break;
        }
    }
    Ok((x, trace))
}

/// Minimize the surrogate `Q(., x_k)` by projected-free gradient descent:
/// candidates losing positive definiteness halve the step (at most 60 times);
/// in backtracking mode an Armijo test on `Q` is applied on top.
fn inner_descent(
    obj: &DcObjective,
    xk: &SpdMatrix,
    cfg: &CccpConfig,
    outer_iter: usize,
) -> Result<SpdMatrix, SolverError> {
    let ls = LineSearchConfig::default();
    let gh = obj.grad_h(xk);
    let mut x = xk.clone();
    let g0_norm = obj.grad_f(&x).sub(&gh).frob_norm();
    let mut eta_start = match cfg.inner_step {
        StepRule::Fixed(eta) => eta,
        StepRule::Backtracking => ls.initial_step,
    };
    for _ in 0..cfg.inner_iters {
        let g = obj.grad_f(&x).sub(&gh);
        let gnorm = g.frob_norm();
        if gnorm <= cfg.inner_tol * (1.0 + g0_norm) {
            break;
        }
        let q0 = obj.eval_f(&x) - gh.dot(x.sym());
        let mut eta = eta_start;
        let mut accepted = None;
        let mut backtracks = 0;
        let mut saw_feasible = false;
        while backtracks <= 60 {
            let cand_mat = x.as_matrix() - g.as_matrix() * eta;
            if is_pd(&cand_mat) {
                saw_feasible = true;
                let cand = SpdMatrix::assume_spd(SymMatrix::new(cand_mat));
                let ok = match cfg.inner_step {
                    StepRule::Fixed(_) => true,
                    StepRule::Backtracking => {
                        let q = obj.eval_f(&cand) - gh.dot(cand.sym());
                        q <= q0 - ls.c1 * eta * gnorm * gnorm
                    }
                };
                if ok {
                    accepted = Some(cand);
                    break;
                }
            }
            eta *= 0.5;
            backtracks += 1;
        }
        match accepted {
            Some(cand) => {
                x = cand;
                // warm-start the next step from twice the accepted one
                eta_start = (eta * 2.0).min(ls.initial_step.max(eta * 2.0));
            }
            None if !saw_feasible => {
                // no SPD-feasible step at all
                return Err(SolverError::LineSearchFailed {
                    iter: outer_iter,
                    backtracks,
                    partial: None,
                });
            }
            None => break, // feasible but no sufficient decrease: surrogate is flat here
        }
    }
    Ok(x)
}

/// Output of [`sqrt_fixed_point`]: the root estimate, the trace, and the
/// condition numbers `kappa(X_k + A)` observed along the run.
pub struct FixedPointRun {
    pub solution: SpdMatrix,
    pub trace: SolverTrace,
    pub cond_numbers: Vec<f64>,
}

/// Square-root fixed point `X <- [(X+A)^{-1} + (X+I)^{-1}]^{-1}`.
///
/// Applies exactly the same map as the CCCP oracle of [`sqrt_objective`], so
/// the two produce identical iterates. Also logs `kappa(X_k + A)` per
/// iteration, the quantity that explains why this iteration tolerates
/// ill-conditioned inputs.
pub fn sqrt_fixed_point(
    a: &SpdMatrix,
    x0: &SpdMatrix,
    iters: usize,
    tol: f64,
    reference: Option<&SpdMatrix>,
) -> FixedPointRun {
    // the map's factorizations carry every log-det the objective needs, so
    // per-iteration objective values are byproducts, not extra solves
    let a_ld = a.try_log_det().unwrap_or(0.0);
    let clock = Instant::now();
    let mut trace = SolverTrace::default();
    let mut cond_numbers = Vec::with_capacity(iters + 1);
    let mut x = x0.clone();
    let mut x_ld: f64 = x.eigenvalues().iter().map(|l| l.ln()).sum();
    let kappa = |x: &SpdMatrix| {
        SpdMatrix::assume_spd(SymMatrix::new(x.as_matrix() + a.as_matrix())).condition_number()
    };
    cond_numbers.push(kappa(&x));
    for k in 0..=iters {
        let wall = clock.elapsed().as_secs_f64();
        let dist = dist_to(reference, &x);
        let step = crate::objectives::sqrt_map_step(&x, a);
        // phi(x_k) = -log det x_k - log det A / 2 + midpoint log-dets
        trace.push(TraceRecord {
            iter: k,
            wall_seconds: wall,
            objective: -x_ld - 0.5 * a_ld + step.mid_log_det,
            dist_to_ref: dist,
            grad_norm: None,
        });
        if k == iters {
            break;
        }
        let rel_change =
            (step.next.as_matrix() - x.as_matrix()).norm() / x.frob_norm().max(1e-300);
        x = step.next;
        x_ld = step.next_log_det;
        cond_numbers.push(kappa(&x));
        if rel_change < tol {
            let wall = clock.elapsed().as_secs_f64();
            let final_step = crate::objectives::sqrt_map_step(&x, a);
            trace.push(TraceRecord {
                iter: k + 1,
                wall_seconds: wall,
                objective: -x_ld - 0.5 * a_ld + final_step.mid_log_det,
                dist_to_ref: dist_to(reference, &x),
                grad_norm: None,
            });
            break;
        }
    }
    FixedPointRun { solution: x, trace, cond_numbers }
}

/// Karcher fixed point `X <- [ sum_i w_i ((X+A_i)/2)^{-1} ]^{-1}`; shares the
/// map with the CCCP oracle of [`karcher_objective`].
pub fn karcher_fixed_point(
    data: &[SpdMatrix],
    weights: Option<&[f64]>,
    x0: &SpdMatrix,
    iters: usize,
    tol: f64,
    reference: Option<&SpdMatrix>,
) -> Result<(SpdMatrix, SolverTrace), SolverError> {
    if data.is_empty() {
        return Err(crate::objectives::ObjectiveError::EmptyData.into());
    }
    let w: Vec<f64> = match weights {
        Some(w) => {
            crate::objectives::karcher_objective(data, weights)?; // validates
            w.to_vec()
        }
        None => vec![1.0 / data.len() as f64; data.len()],
    };
    let const_term: f64 =
        -0.5 * data.iter().zip(&w).map(|(a, wi)| wi * a.log_det()).sum::<f64>();
    let clock = Instant::now();
    let mut trace = SolverTrace::default();
    let mut x = x0.clone();
    let mut x_ld: f64 = x.eigenvalues().iter().map(|l| l.ln()).sum();
    for k in 0..=iters {
        let wall = clock.elapsed().as_secs_f64();
        let dist = dist_to(reference, &x);
        let step = crate::objectives::karcher_map_step(&x, data, &w);
        // phi(x_k) = -log det x_k / 2 + const + weighted midpoint log-dets
        trace.push(TraceRecord {
            iter: k,
            wall_seconds: wall,
            objective: -0.5 * x_ld + const_term + step.mid_log_det,
            dist_to_ref: dist,
            grad_norm: None,
        });
        if k == iters {
            break;
        }
        let rel_change =
            (step.next.as_matrix() - x.as_matrix()).norm() / x.frob_norm().max(1e-300);
        x = step.next;
        x_ld = step.next_log_det;
        if rel_change < tol {
            let wall = clock.elapsed().as_secs_f64();
            let final_step = crate::objectives::karcher_map_step(&x, data, &w);
            trace.push(TraceRecord {
                iter: k + 1,
                wall_seconds: wall,
                objective: -0.5 * x_ld + const_term + final_step.mid_log_det,
                dist_to_ref: dist_to(reference, &x),
                grad_norm: None,
            });
            break;
        }
    }
    Ok((x, trace))
}

/// Riemannian norm squared of the gradient `X egrad X` at `x`:
/// `tr(egrad X egrad X)`, computed without solves.
fn riem_grad_norm_sq(x: &SpdMatrix, egrad: &SymMatrix) -> f64 {
    let m = egrad.as_matrix() * x.as_matrix();
    let mut acc = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            acc += m[(i, j)] * m[(j, i)];
        }
    }
    acc
}

/// The exponential map is SPD in exact arithmetic, but a long enough step
/// underflows the small eigenvalues past what a Cholesky factorization can
/// survive. Line searches treat such candidates as infeasible and backtrack.
fn numerically_pd(x: &SpdMatrix) -> bool {
    x.lambda_min() > 1e-14 * x.lambda_max() && x.lambda_max().is_finite()
}

/// Riemannian gradient descent: retraction along the exponential map with
/// Armijo backtracking on the objective value. Terminates when the Riemannian
/// gradient norm drops below `tol` or after `iters` steps.
pub fn rgd(
    value: &(dyn Fn(&SpdMatrix) -> f64 + Sync),
    egrad: &(dyn Fn(&SpdMatrix) -> SymMatrix + Sync),
    x0: &SpdMatrix,
    ls: &LineSearchConfig,
    iters: usize,
    tol: f64,
    reference: Option<&SpdMatrix>,
) -> Result<(SpdMatrix, SolverTrace), SolverError> {
    rgd_with_stop(value, egrad, x0, ls, iters, tol, reference, None)
}

/// [`rgd`] with an additional caller-defined termination predicate, checked
/// after each accepted step — the benchmark harness uses it to run baselines
/// "to the same tolerance" as the fixed-point solvers.
#[allow(clippy::too_many_arguments)]
pub fn rgd_with_stop(
    value: &(dyn Fn(&SpdMatrix) -> f64 + Sync),
    egrad: &(dyn Fn(&SpdMatrix) -> SymMatrix + Sync),
    x0: &SpdMatrix,
    ls: &LineSearchConfig,
    iters: usize,
    tol: f64,
    reference: Option<&SpdMatrix>,
    stop: Option<&(dyn Fn(&SpdMatrix) -> bool + Sync)>,
) -> Result<(SpdMatrix, SolverTrace), SolverError> {
    let clock = Instant::now();
    let mut trace = SolverTrace::default();
    let mut x = x0.clone();
    let mut fx = value(&x);
    let mut eta_prev = ls.initial_step;
    trace.push(TraceRecord {
        iter: 0,
        wall_seconds: clock.elapsed().as_secs_f64(),
        objective: fx,
        dist_to_ref: dist_to(reference, &x),
        grad_norm: None,
    });
    for k in 1..=iters {
        let eg = egrad(&x);
        let gnorm_sq = riem_grad_norm_sq(&x, &eg);
        let gnorm = gnorm_sq.max(0.0).sqrt();
        if gnorm <= tol {
            break;
        }
        let g = riem_grad(&x, &eg);
        let mut eta = (eta_prev * 2.0).min(ls.initial_step);
        let mut accepted = None;
        for _ in 0..ls.max_backtracks {
            let cand = exp_map(&x, &g, -eta).expect("gradient is based at x");
            if numerically_pd(&cand) {
                let fc = value(&cand);
                if fc <= fx - ls.c1 * eta * gnorm_sq {
                    accepted = Some((cand, fc));
                    break;
                }
            }
            eta *= ls.shrink;
        }
        let Some((cand, fc)) = accepted else {
            return Err(SolverError::LineSearchFailed {
                iter: k,
                backtracks: ls.max_backtracks,
                partial: Some(Box::new((x, trace))),
            });
        };
        x = cand;
        fx = fc;
        eta_prev = eta;
        trace.push(TraceRecord {
            iter: k,
            wall_seconds: clock.elapsed().as_secs_f64(),
            objective: fx,
            dist_to_ref: dist_to(reference, &x),
            grad_norm: Some(gnorm),
        });
        if stop.is_some_and(|s| s(&x)) {
            break;
        }
    }
    Ok((x, trace))
}

/// Riemannian conjugate gradient with Fletcher-Reeves beta and parallel
/// transport of the previous direction. Restarts to steepest descent every
/// `dim` iterations or whenever the candidate direction fails to be a descent
/// direction. The first step coincides with one RGD step.
pub fn rcg(
    value: &(dyn Fn(&SpdMatrix) -> f64 + Sync),
    egrad: &(dyn Fn(&SpdMatrix) -> SymMatrix + Sync),
    x0: &SpdMatrix,
    ls: &LineSearchConfig,
    iters: usize,
    tol: f64,
    reference: Option<&SpdMatrix>,
) -> Result<(SpdMatrix, SolverTrace), SolverError> {
    rcg_with_stop(value, egrad, x0, ls, iters, tol, reference, None)
}

/// [`rcg`] with a caller-defined termination predicate; see [`rgd_with_stop`].
#[allow(clippy::too_many_arguments)]
pub fn rcg_with_stop(
    value: &(dyn Fn(&SpdMatrix) -> f64 + Sync),
    egrad: &(dyn Fn(&SpdMatrix) -> SymMatrix + Sync),
    x0: &SpdMatrix,
    ls: &LineSearchConfig,
    iters: usize,
    tol: f64,
    reference: Option<&SpdMatrix>,
    stop: Option<&(dyn Fn(&SpdMatrix) -> bool + Sync)>,
) -> Result<(SpdMatrix, SolverTrace), SolverError> {
    let clock = Instant::now();
    let mut trace = SolverTrace::default();
    let d = x0.dim();
    let mut x = x0.clone();
    let mut fx = value(&x);
    let mut eta_prev = ls.initial_step;
    let mut prev: Option<(SpdMatrix, TangentVector, f64)> = None; // (point, direction, |g|^2)
    trace.push(TraceRecord {
        iter: 0,
        wall_seconds: clock.elapsed().as_secs_f64(),
        objective: fx,
        dist_to_ref: dist_to(reference, &x),
        grad_norm: None,
    });
    for k in 1..=iters {
        let eg = egrad(&x);
        let gnorm_sq = riem_grad_norm_sq(&x, &eg);
        let gnorm = gnorm_sq.max(0.0).sqrt();
        if gnorm <= tol {
            break;
        }
        let g = riem_grad(&x, &eg);
        let periodic_restart = (k - 1) % d == 0;
        let mut dir = match (&prev, periodic_restart) {
            (Some((px, pdir, pgn2)), false) => {
                let moved = parallel_transport(px, &x, pdir).expect("based at previous point");
                let beta = gnorm_sq / pgn2;
                TangentVector::new(x.clone(), moved.dir.scale(beta).sub(&g.dir))
            }
            _ => TangentVector::new(x.clone(), g.dir.scale(-1.0)),
        };
        // slope of the objective along dir; restart on non-descent
        let mut slope = crate::geometry::inner_affine(&x, &g, &dir).expect("both based at x");
        if slope >= 0.0 {
            dir = TangentVector::new(x.clone(), g.dir.scale(-1.0));
            slope = -gnorm_sq;
        }
        let mut eta = (eta_prev * 2.0).min(ls.initial_step);
        let mut accepted = None;
        for _ in 0..ls.max_backtracks {
            let cand = exp_map(&x, &dir, eta).expect("based at x");
            if numerically_pd(&cand) {
                let fc = value(&cand);
                if fc <= fx + ls.c1 * eta * slope {
                    accepted = Some((cand, fc));
                    break;
                }
            }
            eta *= ls.shrink;
        }
        let Some((cand, fc)) = accepted else {
            return Err(SolverError::LineSearchFailed {
                iter: k,
                backtracks: ls.max_backtracks,
                partial: Some(Box::new((x, trace))),
            });
        };
        prev = Some((x.clone(), dir, gnorm_sq));
        x = cand;
        fx = fc;
        eta_prev = eta;
        trace.push(TraceRecord {
            iter: k,
            wall_seconds: clock.elapsed().as_secs_f64(),
            objective: fx,
            dist_to_ref: dist_to(reference, &x),
            grad_norm: Some(gnorm),
        });
        if stop.is_some_and(|s| s(&x)) {
            break;
        }
    }
    Ok((x, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{karcher_objective, sqrt_objective};
    use crate::testkit::random_spd;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn cccp_sqrt_identity_converges_and_is_monotone() {
        let i = SpdMatrix::identity(4);
        let obj = sqrt_objective(&i);
        let x0 = SpdMatrix::scaled_identity(4, 3.0);
        let (sol, trace) = cccp(&obj, &x0, &CccpConfig::default(), None).unwrap();
        assert!((sol.as_matrix() - i.as_matrix()).norm() <= 1e-9);
        assert!(trace.max_increase() <= 1e-12, "oracle path must be strictly monotone");
    }

    #[test]
    fn cccp_and_fixed_point_iterates_agree_exactly() {
        let mut rng = ChaCha12Rng::seed_from_u64(211);
        let a = random_spd(6, &mut rng);
        let x0 = SpdMatrix::scaled_identity(6, 3.0);
        let cfg = CccpConfig { outer_iters: 50, outer_tol: 0.0, ..CccpConfig::default() };
        let (_, cccp_trace) = cccp(&sqrt_objective(&a), &x0, &cfg, None).unwrap();
        let run = sqrt_fixed_point(&a, &x0, 50, 0.0, None);
        assert_eq!(cccp_trace.records.len(), run.trace.records.len());
        for (a_rec, b_rec) in cccp_trace.records.iter().zip(run.trace.records.iter()) {
            assert!(
                (a_rec.objective - b_rec.objective).abs() <= 1e-10 * (1.0 + a_rec.objective.abs()),
                "fused and closure objective paths disagree: {} vs {}",
                a_rec.objective,
                b_rec.objective
            );
        }
    }

    #[test]
    fn sqrt_fixed_point_small_cases() {
        let a = SpdMatrix::from_diagonal(&[4.0]).unwrap();
        let run = sqrt_fixed_point(&a, &SpdMatrix::identity(1), 200, 1e-14, None);
        assert_relative_eq!(run.solution.as_matrix()[(0, 0)], 2.0, max_relative = 1e-10);

        let i = SpdMatrix::identity(3);
        let run = sqrt_fixed_point(&i, &SpdMatrix::scaled_identity(3, 3.0), 200, 1e-14, None);
        assert!((run.solution.as_matrix() - i.as_matrix()).norm() <= 1e-10);
        assert_eq!(run.cond_numbers.len(), run.trace.records.len());
    }

    #[test]
    fn sqrt_fixed_point_matches_eigen_root() {
        let mut rng = ChaCha12Rng::seed_from_u64(223);
        let a = random_spd(12, &mut rng);
        let run = sqrt_fixed_point(&a, &SpdMatrix::scaled_identity(12, 3.0), 400, 1e-15, None);
        let sq = run.solution.as_matrix() * run.solution.as_matrix();
        let rel = (&sq - a.as_matrix()).norm() / a.frob_norm();
        assert!(rel <= 1e-10, "fixed point root residual {rel}");
    }

    #[test]
    fn karcher_fixed_point_cases() {
        let mut rng = ChaCha12Rng::seed_from_u64(227);
        // m = 1 converges to the datum
        let a = random_spd(4, &mut rng);
        let x0 = SpdMatrix::identity(4);
        let (sol, _) =
            karcher_fixed_point(std::slice::from_ref(&a), None, &x0, 500, 1e-14, None).unwrap();
        assert!((sol.as_matrix() - a.as_matrix()).norm() <= 1e-8 * a.frob_norm());

        // all equal data
        let (sol, _) = karcher_fixed_point(&[a.clone(), a.clone()], None, &x0, 500, 1e-14, None).unwrap();
        assert!((sol.as_matrix() - a.as_matrix()).norm() <= 1e-8 * a.frob_norm());

        // commuting pair: geometric mean
        let p = SpdMatrix::from_diagonal(&[1.0, 4.0]).unwrap();
        let q = SpdMatrix::from_diagonal(&[4.0, 1.0]).unwrap();
        let (sol, trace) =
            karcher_fixed_point(&[p, q], None, &SpdMatrix::identity(2), 500, 1e-15, None).unwrap();
        assert!((sol.as_matrix() - SpdMatrix::scaled_identity(2, 2.0).as_matrix()).norm() <= 1e-7);
        assert!(trace.max_increase() <= 1e-12);
    }

    #[test]
    fn karcher_cccp_equivalence_and_sublinear_bound() {
        let mut rng = ChaCha12Rng::seed_from_u64(229);
        let data: Vec<SpdMatrix> = (0..5).map(|_| random_spd(4, &mut rng)).collect();
        let x0 = SpdMatrix::identity(4);
        let cfg = CccpConfig { outer_iters: 50, outer_tol: 0.0, ..CccpConfig::default() };
        let obj = karcher_objective(&data, None).unwrap();
        let (_, t1) = cccp(&obj, &x0, &cfg, None).unwrap();
        let (_, t2) = karcher_fixed_point(&data, None, &x0, 50, 0.0, None).unwrap();
        for (a_rec, b_rec) in t1.records.iter().zip(t2.records.iter()) {
            assert!(
                (a_rec.objective - b_rec.objective).abs() <= 1e-10 * (1.0 + a_rec.objective.abs()),
                "fused and closure objective paths disagree"
            );
        }

        // sublinear-rate shape: (k+2) * (phi_k - phi_*) stays below twice its
        // initial value over k in [1, 50]
        let star = t2.final_objective();
        let seq: Vec<f64> = t2
            .records
            .iter()
            .skip(1)
            .map(|r| (r.iter as f64 + 2.0) * (r.objective - star))
            .collect();
        let first = seq[0].max(1e-300);
        for v in &seq {
            assert!(*v <= 2.0 * first + 1e-12, "sublinear envelope violated: {v} vs {first}");
        }
    }

    #[test]
    fn cccp_inner_descent_path_is_monotone() {
        let mut rng = ChaCha12Rng::seed_from_u64(233);
        let data = crate::objectives::DatasetVectors::new(
            (0..40)
                .map(|_| nalgebra::DVector::from_fn(4, |_, _| rand::Rng::random::<f64>(&mut rng) - 0.5))
                .collect(),
        )
        .unwrap();
        let anchor = random_spd(4, &mut rng);
        let obj = crate::objectives::gaussian_optimistic(&data, &anchor, 1.0).unwrap();
        let cfg = CccpConfig { outer_iters: 60, ..CccpConfig::default() };
        let (sol, trace) = cccp(&obj, &anchor, &cfg, None).unwrap();
        assert!(trace.max_increase() <= 1e-9, "inner-GD CCCP increased the objective");
        assert!(sol.lambda_min() > 0.0);
    }

    #[test]
    fn rgd_converges_on_quadratic_toy() {
        let mut rng = ChaCha12Rng::seed_from_u64(239);
        // well-conditioned target so the affine-invariant metric does not
        // distort the Euclidean quadratic
        let b = SpdMatrix::new(crate::testkit::random_sym(4, &mut rng).scale(0.2).add(&SymMatrix::identity(4)))
            .unwrap();
        let value = |x: &SpdMatrix| 0.5 * (x.as_matrix() - b.as_matrix()).norm().powi(2);
        let egrad = |x: &SpdMatrix| x.sym().sub(b.sym());
        let x0 = SpdMatrix::new(SymMatrix::new(
            b.as_matrix() + nalgebra::DMatrix::identity(4, 4) * 0.3,
        ))
        .unwrap();
        let (sol, trace) =
            rgd(&value, &egrad, &x0, &LineSearchConfig::default(), 2000, 1e-10, Some(&b)).unwrap();
        assert!((sol.as_matrix() - b.as_matrix()).norm() <= 1e-7 * b.frob_norm());
        assert!(trace.max_increase() <= 0.0, "Armijo steps must decrease the value");
        assert!(trace.last().unwrap().dist_to_ref.unwrap() <= 1e-6);
    }

    #[test]
    fn rcg_first_step_equals_rgd_and_is_no_slower_on_toy() {
        let mut rng = ChaCha12Rng::seed_from_u64(241);
        let b = random_spd(4, &mut rng);
        let value = |x: &SpdMatrix| 0.5 * (x.as_matrix() - b.as_matrix()).norm().powi(2);
        let egrad = |x: &SpdMatrix| x.sym().sub(b.sym());
        let x0 = SpdMatrix::new(SymMatrix::new(
            b.as_matrix() + nalgebra::DMatrix::identity(4, 4) * 0.4,
        ))
        .unwrap();
        let ls = LineSearchConfig::default();

        let (rgd_sol, rgd_trace) = rgd(&value, &egrad, &x0, &ls, 1, 0.0, None).unwrap();
        let (rcg_sol, _) = rcg(&value, &egrad, &x0, &ls, 1, 0.0, None).unwrap();
        assert!(
            (rgd_sol.as_matrix() - rcg_sol.as_matrix()).norm() <= 1e-14 * (1.0 + rgd_sol.frob_norm()),
            "first CG step must coincide with steepest descent"
        );

        let (_, rgd_full) = rgd(&value, &egrad, &x0, &ls, 500, 1e-9, None).unwrap();
        let (_, rcg_full) = rcg(&value, &egrad, &x0, &ls, 500, 1e-9, None).unwrap();
        assert!(
            rcg_full.records.len() <= rgd_full.records.len(),
            "CG took {} iterations vs GD {}",
            rcg_full.records.len(),
            rgd_full.records.len()
        );
        let _ = rgd_trace;
    }

    #[test]
    fn all_solvers_keep_iterates_spd() {
        let mut rng = ChaCha12Rng::seed_from_u64(251);
        let a = random_spd(5, &mut rng);
        let run = sqrt_fixed_point(&a, &SpdMatrix::scaled_identity(5, 3.0), 100, 1e-12, None);
        assert!(run.solution.lambda_min() > 0.0);

        let obj = sqrt_objective(&a);
        let value = |x: &SpdMatrix| obj.value(x);
        let egrad = |x: &SpdMatrix| obj.grad(x);
        let (sol, _) = rgd(
            &value,
            &egrad,
            &SpdMatrix::scaled_identity(5, 3.0),
            &LineSearchConfig::default(),
            50,
            1e-8,
            None,
        )
        .unwrap();
        assert!(sol.lambda_min() > 0.0);
    }
}
