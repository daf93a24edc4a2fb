//! Difference-of-convex objective builders.
//!
//! Every application produces a [`DcObjective`]: a convex part `f`, a convex
//! function `h` entering as `-h` (so the objective is `phi = f - h`), their
//! Euclidean gradients, and — when the surrogate minimization has a closed
//! form — a fixed-point oracle. This is the entire contract the CCCP solver
//! consumes.
//!
//! Additive constants dropped by the likelihood derivations are kept where
//! they are cheap (anchor log-determinants), so objective values are
//! comparable within a run; traces of likelihood experiments report values
//! shifted by the best seen, not raw magnitudes.

use crate::regularizers::Regularizer;
use crate::spd::{chol_inverse, chol_log_det, symmetrize_in_place, SpdMatrix, SymMatrix};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ObjectiveError {
    #[error("empty data")]
    EmptyData,
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("sample {0} is the zero vector")]
    ZeroSample(usize),
    #[error("sample {index} has a non-positive entry {value}")]
    NonPositiveSample { index: usize, value: f64 },
    #[error("sample covariance is indefinite (lambda_min = {lambda_min:.3e})")]
    DegenerateCovariance { lambda_min: f64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("regularizer kind {0} has no DC split; solve it with the Riemannian baselines instead")]
    NotDcCertified(&'static str),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Regularizer(#[from] crate::regularizers::RegularizerError),
}

type ValueFn = Box<dyn Fn(&SpdMatrix) -> f64 + Send + Sync>;
type GradFn = Box<dyn Fn(&SpdMatrix) -> SymMatrix + Send + Sync>;
type OracleFn = Box<dyn Fn(&SpdMatrix) -> SpdMatrix + Send + Sync>;

/// A function `phi = f - h` on the cone with `f`, `h` Euclidean convex,
/// carrying gradients and optionally an exact surrogate minimizer.
pub struct DcObjective {
    dim: usize,
    f: ValueFn,
    grad_f: GradFn,
    h: ValueFn,
    grad_h: GradFn,
    oracle: Option<OracleFn>,
}

impl DcObjective {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `phi(x) = f(x) - h(x)`.
    pub fn value(&self, x: &SpdMatrix) -> f64 {
        (self.f)(x) - (self.h)(x)
    }

    pub fn eval_f(&self, x: &SpdMatrix) -> f64 {
        (self.f)(x)
    }

    pub fn eval_h(&self, x: &SpdMatrix) -> f64 {
        (self.h)(x)
    }

    pub fn grad_f(&self, x: &SpdMatrix) -> SymMatrix {
        (self.grad_f)(x)
    }

    pub fn grad_h(&self, x: &SpdMatrix) -> SymMatrix {
        (self.grad_h)(x)
    }

    /// Full Euclidean gradient of `phi`.
    pub fn grad(&self, x: &SpdMatrix) -> SymMatrix {
        self.grad_f(x).sub(&self.grad_h(x))
    }

    /// CCCP surrogate `Q(x, y) = f(x) - h(y) - <grad_h(y), x - y>`; majorizes
    /// `phi` and touches it at `x = y`.
    pub fn surrogate(&self, x: &SpdMatrix, at: &SpdMatrix) -> f64 {
        let gh = self.grad_h(at);
        let lin = gh.dot(&x.sym().sub(at.sym()));
        self.eval_f(x) - self.eval_h(at) - lin
    }

    /// Gradient of the surrogate in its first argument.
    pub fn surrogate_grad(&self, x: &SpdMatrix, at: &SpdMatrix) -> SymMatrix {
        self.grad_f(x).sub(&self.grad_h(at))
    }

    pub fn oracle(&self) -> Option<&OracleFn> {
        self.oracle.as_ref()
    }
}

/// Sample vectors with optional weights; the shared input of the likelihood
/// builders.
#[derive(Clone, Debug)]
pub struct DatasetVectors {
    samples: Vec<DVector<f64>>,
    weights: Option<Vec<f64>>,
    matrix: DMatrix<f64>,
}

impl DatasetVectors {
    pub fn new(samples: Vec<DVector<f64>>) -> Result<Self, ObjectiveError> {
        if samples.is_empty() {
            return Err(ObjectiveError::EmptyData);
        }
        let d = samples[0].len();
        if d == 0 || samples.iter().any(|s| s.len() != d) {
            return Err(ObjectiveError::ShapeMismatch(
                "samples must share a positive dimension".into(),
            ));
        }
        let n = samples.len();
        let matrix = DMatrix::from_fn(d, n, |i, j| samples[j][i]);
        Ok(DatasetVectors { samples, weights: None, matrix })
    }

    pub fn with_weights(samples: Vec<DVector<f64>>, weights: Vec<f64>) -> Result<Self, ObjectiveError> {
        let mut out = DatasetVectors::new(samples)?;
        validate_weights(&weights, out.n())?;
        out.weights = Some(weights);
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn dim(&self) -> usize {
        self.samples[0].len()
    }

    pub fn samples(&self) -> &[DVector<f64>] {
        &self.samples
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    /// The `d x n` matrix with samples as columns.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Zero-mean sample covariance `(1/n) sum x x^T`.
    pub fn scatter(&self) -> SymMatrix {
        let mut s = &self.matrix * self.matrix.transpose();
        s /= self.n() as f64;
        symmetrize_in_place(&mut s);
        SymMatrix::new(s)
    }

    /// Mean-subtracted copy (the `--center` convention).
    pub fn centered(&self) -> DatasetVectors {
        let n = self.n() as f64;
        let mean = self.samples.iter().fold(DVector::zeros(self.dim()), |acc, s| acc + s) / n;
        let samples: Vec<DVector<f64>> = self.samples.iter().map(|s| s - &mean).collect();
        let mut out = DatasetVectors::new(samples).expect("same shape as input");
        out.weights = self.weights.clone();
        out
    }

    /// Quadratic forms `q_i = x_i^T Sigma^{-1} x_i`, one Cholesky solve for
    /// the whole batch.
    pub fn quad_forms(&self, sigma: &SpdMatrix) -> Vec<f64> {
        let solved = sigma.solve(&self.matrix);
        (0..self.n())
            .map(|j| self.matrix.column(j).dot(&solved.column(j)))
            .collect()
    }

    /// Weighted scatter `X diag(c) X^T`, symmetrized.
    pub fn weighted_scatter(&self, coeffs: &[f64]) -> SymMatrix {
        let scaled = crate::spd::scale_columns(&self.matrix, &DVector::from_row_slice(coeffs));
        let mut s = scaled * self.matrix.transpose();
        symmetrize_in_place(&mut s);
        SymMatrix::new(s)
    }

    fn require_nonzero(&self) -> Result<(), ObjectiveError> {
        for (i, s) in self.samples.iter().enumerate() {
            if s.iter().all(|&v| v == 0.0) {
                return Err(ObjectiveError::ZeroSample(i));
            }
        }
        Ok(())
    }

    fn require_positive(&self) -> Result<(), ObjectiveError> {
        for (i, s) in self.samples.iter().enumerate() {
            if let Some(&v) = s.iter().find(|&&v| v <= 0.0) {
                return Err(ObjectiveError::NonPositiveSample { index: i, value: v });
            }
        }
        Ok(())
    }
}

fn validate_weights(weights: &[f64], n: usize) -> Result<(), ObjectiveError> {
    if weights.len() != n {
        return Err(ObjectiveError::InvalidWeights(format!(
            "{} weights for {} items",
            weights.len(),
            n
        )));
    }
    if weights.iter().any(|&w| w < 0.0) {
        return Err(ObjectiveError::InvalidWeights("negative weight".into()));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-8 {
        return Err(ObjectiveError::InvalidWeights(format!("weights sum to {sum}, not 1")));
    }
    Ok(())
}

/// Deterministic parallel sum of per-index matrices: indices are split into a
/// fixed number of chunks, each chunk reduced sequentially, and the chunk
/// results added in index order — so the result does not depend on the thread
/// count.
fn par_sum_matrices(d: usize, count: usize, per: impl Fn(usize) -> DMatrix<f64> + Sync) -> DMatrix<f64> {
    const CHUNKS: usize = 8;
    let chunk_len = count.div_ceil(CHUNKS);
    let partials: Vec<DMatrix<f64>> = (0..count.div_ceil(chunk_len))
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk_len;
            let hi = (lo + chunk_len).min(count);
            let mut acc = DMatrix::zeros(d, d);
            for i in lo..hi {
                acc += per(i);
            }
            acc
        })
        .collect();
    let mut total = DMatrix::zeros(d, d);
    for p in partials {
        total += p;
    }
    total
}

fn par_sum_scalars(count: usize, per: impl Fn(usize) -> f64 + Sync) -> f64 {
    const CHUNKS: usize = 8;
    let chunk_len = count.div_ceil(CHUNKS);
    let partials: Vec<f64> = (0..count.div_ceil(chunk_len))
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk_len;
            let hi = (lo + chunk_len).min(count);
            let mut acc = 0.0;
            for i in lo..hi {
                acc += per(i);
            }
            acc
        })
        .collect();
    partials.iter().sum()
}

/// Byproducts of one fixed-point application: the factorizations the map
/// needs already carry the log-determinants that make up the objective, so
/// the fixed-point solvers get per-iteration objective values for free.
pub struct MapStep {
    pub next: SpdMatrix,
    /// `h(x)`-side log-determinant sum at the *current* point (the weighted
    /// midpoint log-dets).
    pub mid_log_det: f64,
    /// `log det` of the produced iterate.
    pub next_log_det: f64,
}

/// One application of the square-root fixed-point map
/// `X <- [(X + A)^{-1} + (X + I)^{-1}]^{-1}`, with objective byproducts.
///
/// This is the exact minimizer of the CCCP surrogate of
/// `delta_S^2(X, A) + delta_S^2(X, I)`; the fixed-point solver and the
/// generic CCCP oracle both run this code, so their iterates agree bitwise.
pub fn sqrt_map_step(x: &SpdMatrix, a: &SpdMatrix) -> MapStep {
    let d = x.dim();
    let xa = x.as_matrix() + a.as_matrix();
    let xi = x.as_matrix() + DMatrix::identity(d, d);
    let chol_a = crate::spd::try_cholesky(&xa).expect("X + A is SPD");
    let chol_i = crate::spd::try_cholesky(&xi).expect("X + I is SPD");
    // log det((X+A)/2) + log det((X+I)/2)
    let mid_log_det = chol_factor_log_det(&chol_a) + chol_factor_log_det(&chol_i)
        - 2.0 * d as f64 * std::f64::consts::LN_2;
    let eye = DMatrix::identity(d, d);
    let mut sum = chol_a.solve(&eye);
    sum += chol_i.solve(&eye);
    symmetrize_in_place(&mut sum);
    let chol_sum = crate::spd::try_cholesky(&sum).expect("sum of SPD inverses is SPD");
    let next_log_det = -chol_factor_log_det(&chol_sum);
    let mut inv = chol_sum.solve(&eye);
    symmetrize_in_place(&mut inv);
    MapStep {
        next: SpdMatrix::assume_spd(SymMatrix::new(inv)),
        mid_log_det,
        next_log_det,
    }
}

/// The iterate of [`sqrt_map_step`] alone.
pub fn sqrt_map(x: &SpdMatrix, a: &SpdMatrix) -> SpdMatrix {
    sqrt_map_step(x, a).next
}

fn chol_factor_log_det(chol: &nalgebra::Cholesky<f64, nalgebra::Dyn>) -> f64 {
    2.0 * chol.l_dirty().diagonal().iter().map(|x| x.ln()).sum::<f64>()
}

/// One application of the Karcher fixed-point map
/// `X <- [ sum_i w_i ((X + A_i)/2)^{-1} ]^{-1}` (the CCCP oracle of the
/// S-divergence barycenter problem), with objective byproducts.
pub fn karcher_map_step(x: &SpdMatrix, data: &[SpdMatrix], weights: &[f64]) -> MapStep {
    let d = x.dim();
    let eye = DMatrix::identity(d, d);
    let (sum, mid_log_det) = {
        const CHUNKS: usize = 8;
        let count = data.len();
        let chunk_len = count.div_ceil(CHUNKS);
        let partials: Vec<(DMatrix<f64>, f64)> = (0..count.div_ceil(chunk_len))
            .into_par_iter()
            .map(|c| {
                let lo = c * chunk_len;
                let hi = (lo + chunk_len).min(count);
                let mut acc = DMatrix::zeros(d, d);
                let mut ld = 0.0;
                for i in lo..hi {
                    let mid = (x.as_matrix() + data[i].as_matrix()) * 0.5;
                    let chol = crate::spd::try_cholesky(&mid).expect("midpoint is SPD");
                    ld += weights[i] * chol_factor_log_det(&chol);
                    acc += chol.solve(&eye) * weights[i];
                }
                (acc, ld)
            })
            .collect();
        let mut total = DMatrix::zeros(d, d);
        let mut ld = 0.0;
        for (p, l) in partials {
            total += p;
            ld += l;
        }
        (total, ld)
    };
    let mut sum = sum;
    symmetrize_in_place(&mut sum);
    let chol_sum = crate::spd::try_cholesky(&sum).expect("weighted sum of SPD inverses is SPD");
    let next_log_det = -chol_factor_log_det(&chol_sum);
    let mut inv = chol_sum.solve(&eye);
    symmetrize_in_place(&mut inv);
    MapStep {
        next: SpdMatrix::assume_spd(SymMatrix::new(inv)),
        mid_log_det,
        next_log_det,
    }
}

/// The iterate of [`karcher_map_step`] alone.
pub fn karcher_map(x: &SpdMatrix, data: &[SpdMatrix], weights: &[f64]) -> SpdMatrix {
    karcher_map_step(x, data, weights).next
}

/// `delta_S^2(X, A) + delta_S^2(X, I)`, minimized at `A^{1/2}`.
///
/// Split: `f = -log det X - log det A / 2`,
/// `h = -log det((X+A)/2) - log det((X+I)/2)`; the oracle is [`sqrt_map`].
pub fn sqrt_objective(a: &SpdMatrix) -> DcObjective {
    let d = a.dim();
    // the constant -log det A / 2 only shifts the objective; inputs that are
    // numerically singular (large Hilbert matrices) simply drop it
    let a_ld = a.try_log_det().unwrap_or(0.0);
    let a1 = a.clone();
    let a2 = a.clone();
    let a3 = a.clone();
    DcObjective {
        dim: d,
        f: Box::new(move |x| -x.log_det() - 0.5 * a_ld),
        grad_f: Box::new(|x| x.inverse().sym().scale(-1.0)),
        h: Box::new(move |x| {
            let mid_a = (x.as_matrix() + a1.as_matrix()) * 0.5;
            let mid_i = (x.as_matrix() + DMatrix::identity(x.dim(), x.dim())) * 0.5;
            -chol_log_det(&mid_a).expect("SPD") - chol_log_det(&mid_i).expect("SPD")
        }),
        grad_h: Box::new(move |x| {
            let xa = x.as_matrix() + a2.as_matrix();
            let xi = x.as_matrix() + DMatrix::identity(x.dim(), x.dim());
            let mut g = chol_inverse(&xa).expect("SPD");
            g += chol_inverse(&xi).expect("SPD");
            SymMatrix::new(-g)
        }),
        oracle: Some(Box::new(move |x| sqrt_map(x, &a3))),
    }
}

/// Weighted S-divergence barycenter `sum_i w_i delta_S^2(X, A_i)`.
///
/// `None` weights means uniform. The oracle is [`karcher_map`].
pub fn karcher_objective(
    data: &[SpdMatrix],
    weights: Option<&[f64]>,
) -> Result<DcObjective, ObjectiveError> {
    if data.is_empty() {
        return Err(ObjectiveError::EmptyData);
    }
    let m = data.len();
    let d = data[0].dim();
    if data.iter().any(|a| a.dim() != d) {
        return Err(ObjectiveError::ShapeMismatch("mixed dimensions in Karcher data".into()));
    }
    let w: Vec<f64> = match weights {
        Some(w) => {
            validate_weights(w, m)?;
            w.to_vec()
        }
        None => vec![1.0 / m as f64; m],
    };
    let const_term: f64 = -0.5 * data.iter().zip(&w).map(|(a, wi)| wi * a.log_det()).sum::<f64>();
    let data = Arc::new(data.to_vec());
    let w = Arc::new(w);
    let (data_h, w_h) = (Arc::clone(&data), Arc::clone(&w));
    let (data_g, w_g) = (Arc::clone(&data), Arc::clone(&w));
    let (data_o, w_o) = (Arc::clone(&data), Arc::clone(&w));
    Ok(DcObjective {
        dim: d,
        f: Box::new(move |x| -0.5 * x.log_det() + const_term),
        grad_f: Box::new(|x| x.inverse().sym().scale(-0.5)),
        h: Box::new(move |x| {
            -par_sum_scalars(data_h.len(), |i| {
                let mid = (x.as_matrix() + data_h[i].as_matrix()) * 0.5;
                w_h[i] * chol_log_det(&mid).expect("SPD")
            })
        }),
        grad_h: Box::new(move |x| {
            let sum = par_sum_matrices(x.dim(), data_g.len(), |i| {
                let s = x.as_matrix() + data_g[i].as_matrix();
                chol_inverse(&s).expect("SPD") * w_g[i]
            });
            SymMatrix::new(-sum)
        }),
        oracle: Some(Box::new(move |x| karcher_map(x, &data_o, &w_o))),
    })
}

/// Optimistic Gaussian likelihood
/// `tr(S Sigma^{-1}) + log det Sigma + beta * delta_S^2(Sigma, anchor)`
/// with `S` the zero-mean sample covariance (center the data upstream for the
/// mean-subtracted convention).
///
/// Split: `f = tr(S Sigma^{-1}) - (beta/2) log det Sigma + const`,
/// `h = -log det Sigma - beta log det((Sigma + anchor)/2)`. No closed-form
/// oracle; the surrogate is minimized by inner gradient descent.
pub fn gaussian_optimistic(
    data: &DatasetVectors,
    anchor: &SpdMatrix,
    beta: f64,
) -> Result<DcObjective, ObjectiveError> {
    if beta < 0.0 {
        return Err(ObjectiveError::BadParameter(format!("beta = {beta} must be >= 0")));
    }
    if data.dim() != anchor.dim() {
        return Err(ObjectiveError::ShapeMismatch("anchor dimension != data dimension".into()));
    }
    let s = data.scatter();
    gaussian_family(s, anchor, beta, 1.0)
}

/// Shared implementation of the Gaussian-shaped objectives: the quadratic
/// data term enters as `scale * tr(S Sigma^{-1})` and the log-det term as
/// `scale * log det Sigma`.
fn gaussian_family(
    s: SymMatrix,
    anchor: &SpdMatrix,
    beta: f64,
    scale: f64,
) -> Result<DcObjective, ObjectiveError> {
    let d = s.dim();
    let eig = crate::spd::eig_sym(&s);
    let lambda_min = eig.values[d - 1];
    if lambda_min < -1e-10 * eig.values[0].max(1.0) {
        return Err(ObjectiveError::DegenerateCovariance { lambda_min });
    }
    let anchor_ld = anchor.log_det();
    let s = Arc::new(s);
    let s_g = Arc::clone(&s);
    let anchor1 = anchor.clone();
    let anchor2 = anchor.clone();
    Ok(DcObjective {
        dim: d,
        f: Box::new(move |x| {
            let traced = x.solve(s.as_matrix()).trace();
            scale * traced - 0.5 * beta * x.log_det() - 0.5 * beta * anchor_ld
        }),
        grad_f: Box::new(move |x| {
            let inv_s_inv = x.solve(&x.solve(s_g.as_matrix()).transpose());
            let mut g = inv_s_inv * (-scale);
            g -= x.inverse().as_matrix() * (0.5 * beta);
            symmetrize_in_place(&mut g);
            SymMatrix::new(g)
        }),
        h: Box::new(move |x| {
            let mid = (x.as_matrix() + anchor1.as_matrix()) * 0.5;
            -scale * x.log_det() - beta * chol_log_det(&mid).expect("SPD")
        }),
        grad_h: Box::new(move |x| {
            let sum = x.as_matrix() + anchor2.as_matrix();
            let mut g = x.inverse().as_matrix() * (-scale);
            g -= chol_inverse(&sum).expect("SPD") * beta;
            symmetrize_in_place(&mut g);
            SymMatrix::new(g)
        }),
        oracle: None,
    })
}

/// Optimistic Kotz-type likelihood
/// `K(Sigma) + gamma * delta_S^2(Sigma, anchor)` with
/// `K = (n/2) log det Sigma + (d/2 - alpha) sum_i log q_i + sum_i (q_i/b)^shape`.
///
/// The per-sample weight in the gradient is the chain-rule coefficient
/// `(alpha - d/2)/q_i - shape * q_i^{shape-1} / b^shape`; in the shape = 1
/// case this reduces to the Gaussian-like `-1/b`.
pub fn kotz_optimistic(
    data: &DatasetVectors,
    alpha: f64,
    b: f64,
    shape: f64,
    anchor: &SpdMatrix,
    gamma: f64,
) -> Result<DcObjective, ObjectiveError> {
    let d = data.dim();
    let n = data.n() as f64;
    if !(alpha > 0.0 && alpha <= d as f64 / 2.0) {
        return Err(ObjectiveError::BadParameter(format!(
            "alpha = {alpha} outside (0, d/2] with d = {d}"
        )));
    }
    if !(b > 0.0) || !(shape > 0.0) || gamma < 0.0 {
        return Err(ObjectiveError::BadParameter(format!(
            "need b > 0, shape > 0, gamma >= 0 (b={b}, shape={shape}, gamma={gamma})"
        )));
    }
    if anchor.dim() != d {
        return Err(ObjectiveError::ShapeMismatch("anchor dimension != data dimension".into()));
    }
    data.require_nonzero()?;
    let anchor_ld = anchor.log_det();
    let data = Arc::new(data.clone());
    let data_g = Arc::clone(&data);
    let anchor1 = anchor.clone();
    let anchor2 = anchor.clone();
    let half_excess = d as f64 / 2.0 - alpha;
    Ok(DcObjective {
        dim: d,
        f: Box::new(move |x| {
            let q = data.quad_forms(x);
            let logs: f64 = q.iter().map(|qi| qi.ln()).sum();
            let powers: f64 = q.iter().map(|qi| (qi / b).powf(shape)).sum();
            half_excess * logs + powers - 0.5 * gamma * x.log_det() - 0.5 * gamma * anchor_ld
        }),
        grad_f: Box::new(move |x| {
            let q = data_g.quad_forms(x);
            let coeffs: Vec<f64> = q
                .iter()
                .map(|&qi| -half_excess / qi - shape * qi.powf(shape - 1.0) / b.powf(shape))
                .collect();
            let scatter = data_g.weighted_scatter(&coeffs);
            let inner = x.solve(&x.solve(scatter.as_matrix()).transpose());
            let mut g = inner;
            g -= x.inverse().as_matrix() * (0.5 * gamma);
            symmetrize_in_place(&mut g);
            SymMatrix::new(g)
        }),
        h: Box::new(move |x| {
            let mid = (x.as_matrix() + anchor1.as_matrix()) * 0.5;
            -0.5 * n * x.log_det() - gamma * chol_log_det(&mid).expect("SPD")
        }),
        grad_h: Box::new(move |x| {
            let sum = x.as_matrix() + anchor2.as_matrix();
            let mut g = x.inverse().as_matrix() * (-0.5 * n);
            g -= chol_inverse(&sum).expect("SPD") * gamma;
            symmetrize_in_place(&mut g);
            SymMatrix::new(g)
        }),
        oracle: None,
    })
}

/// Optimistic multivariate-t likelihood
/// `T_nu(Sigma) + gamma * delta_S^2(Sigma, anchor)` with
/// `T_nu = (n/2) log det Sigma + ((nu+d)/2) sum_i log(1 + q_i/nu)`.
pub fn mvt_optimistic(
    data: &DatasetVectors,
    nu: f64,
    anchor: &SpdMatrix,
    gamma: f64,
) -> Result<DcObjective, ObjectiveError> {
    if !(nu > 0.0) {
        return Err(ObjectiveError::BadParameter(format!("nu = {nu} must be > 0")));
    }
    if gamma < 0.0 {
        return Err(ObjectiveError::BadParameter(format!("gamma = {gamma} must be >= 0")));
    }
    let d = data.dim();
    if anchor.dim() != d {
        return Err(ObjectiveError::ShapeMismatch("anchor dimension != data dimension".into()));
    }
    let n = data.n() as f64;
    let anchor_ld = anchor.log_det();
    let data = Arc::new(data.clone());
    let data_g = Arc::clone(&data);
    let anchor1 = anchor.clone();
    let anchor2 = anchor.clone();
    let half_nd = 0.5 * (nu + d as f64);
    Ok(DcObjective {
        dim: d,
        f: Box::new(move |x| {
            let q = data.quad_forms(x);
            let logs: f64 = q.iter().map(|qi| (1.0 + qi / nu).ln()).sum();
            half_nd * logs - 0.5 * gamma * x.log_det() - 0.5 * gamma * anchor_ld
        }),
        grad_f: Box::new(move |x| {
            let q = data_g.quad_forms(x);
            let coeffs: Vec<f64> = q.iter().map(|&qi| 1.0 / (nu + qi)).collect();
            let scatter = data_g.weighted_scatter(&coeffs);
            let inner = x.solve(&x.solve(scatter.as_matrix()).transpose());
            let mut g = inner * (-half_nd);
            g -= x.inverse().as_matrix() * (0.5 * gamma);
            symmetrize_in_place(&mut g);
            SymMatrix::new(g)
        }),
        h: Box::new(move |x| {
            let mid = (x.as_matrix() + anchor1.as_matrix()) * 0.5;
            -0.5 * n * x.log_det() - gamma * chol_log_det(&mid).expect("SPD")
        }),
        grad_h: Box::new(move |x| {
            let sum = x.as_matrix() + anchor2.as_matrix();
            let mut g = x.inverse().as_matrix() * (-0.5 * n);
            g -= chol_inverse(&sum).expect("SPD") * gamma;
            symmetrize_in_place(&mut g);
            SymMatrix::new(g)
        }),
        oracle: None,
    })
}

/// Optimistic log-normal likelihood: the Gaussian-shaped objective on the
/// elementwise logs of strictly positive samples,
/// `(n/2)[log det Sigma + tr(S_y Sigma^{-1})] + beta * delta_S^2(Sigma, anchor)`
/// with `S_y` the scatter of `y_i = log x_i`.
pub fn lognormal_optimistic(
    data: &DatasetVectors,
    anchor: &SpdMatrix,
    beta: f64,
) -> Result<DcObjective, ObjectiveError> {
    if beta < 0.0 {
        return Err(ObjectiveError::BadParameter(format!("beta = {beta} must be >= 0")));
    }
    if data.dim() != anchor.dim() {
        return Err(ObjectiveError::ShapeMismatch("anchor dimension != data dimension".into()));
    }
    data.require_positive()?;
    let logs: Vec<DVector<f64>> = data.samples().iter().map(|s| s.map(f64::ln)).collect();
    let log_data = DatasetVectors::new(logs)?;
    let n = log_data.n() as f64;
    gaussian_family(log_data.scatter(), anchor, beta, 0.5 * n)
}

/// Tyler's M-estimator objective with diagonal loading:
/// `(d/n) sum_i log q_i + log det Sigma + beta (tr Sigma^{-1} + log det Sigma)`.
pub fn tyler_diag_loading(data: &DatasetVectors, beta: f64) -> Result<DcObjective, ObjectiveError> {
    if !(beta > 0.0) {
        return Err(ObjectiveError::BadParameter(format!("beta = {beta} must be > 0")));
    }
    data.require_nonzero()?;
    let d = data.dim();
    let n = data.n() as f64;
    let ratio = d as f64 / n;
    let data = Arc::new(data.clone());
    let data_g = Arc::clone(&data);
    Ok(DcObjective {
        dim: d,
        f: Box::new(move |x| {
            let q = data.quad_forms(x);
            ratio * q.iter().map(|qi| qi.ln()).sum::<f64>() + beta * x.inverse().trace()
        }),
        grad_f: Box::new(move |x| {
            let q = data_g.quad_forms(x);
            let coeffs: Vec<f64> = q.iter().map(|&qi| 1.0 / qi).collect();
            let scatter = data_g.weighted_scatter(&coeffs);
            let inner = x.solve(&x.solve(scatter.as_matrix()).transpose());
            let inv = x.inverse();
            let mut g = inner * (-ratio);
            g -= inv.as_matrix() * inv.as_matrix() * beta;
            symmetrize_in_place(&mut g);
            SymMatrix::new(g)
        }),
        h: Box::new(move |x| -(1.0 + beta) * x.log_det()),
        grad_h: Box::new(move |x| x.inverse().sym().scale(-(1.0 + beta))),
        oracle: None,
    })
}

/// Least squares on the cone: `sum_j (tr(W Sym(X_j)) - y_j)^2 / 2` plus a
/// DC-certified regularizer. Gauge-ball regularizers carry no DC split and
/// are rejected here; solve those with the Riemannian baselines on
/// `value`/`egrad` callbacks instead.
pub fn spd_regression(
    x_data: &[DMatrix<f64>],
    y: &[f64],
    reg: &Regularizer,
) -> Result<DcObjective, ObjectiveError> {
    if x_data.is_empty() {
        return Err(ObjectiveError::EmptyData);
    }
    if x_data.len() != y.len() {
        return Err(ObjectiveError::ShapeMismatch(format!(
            "{} design matrices vs {} targets",
            x_data.len(),
            y.len()
        )));
    }
    let d = x_data[0].nrows();
    for (j, m) in x_data.iter().enumerate() {
        if m.nrows() != d || m.ncols() != d {
            return Err(ObjectiveError::ShapeMismatch(format!(
                "design matrix {j} is {}x{}, expected {d}x{d}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    reg.validate(d)?;
    let split = reg
        .dc_split()
        .ok_or(ObjectiveError::NotDcCertified("gauge ball"))?;
    let sym_x: Arc<Vec<SymMatrix>> =
        Arc::new(x_data.iter().map(|m| SymMatrix::new(m.clone())).collect());
    let sym_x_g = Arc::clone(&sym_x);
    let y1: Arc<Vec<f64>> = Arc::new(y.to_vec());
    let y2 = Arc::clone(&y1);
    let (cv, cg, kv, kg) =
        (split.convex_value, split.convex_grad, split.concave_value, split.concave_grad);
    Ok(DcObjective {
        dim: d,
        f: Box::new(move |w| {
            let quad: f64 = sym_x
                .iter()
                .zip(y1.iter())
                .map(|(s, yi)| {
                    let r = w.sym().dot(s) - yi;
                    0.5 * r * r
                })
                .sum();
            quad + cv(w)
        }),
        grad_f: Box::new(move |w| {
            let mut g = cg(w).into_matrix();
            for (s, yi) in sym_x_g.iter().zip(y2.iter()) {
                let r = w.sym().dot(s) - yi;
                g += s.as_matrix() * r;
            }
            SymMatrix::new(g)
        }),
        h: Box::new(move |w| -kv(w)),
        grad_h: Box::new(move |w| kg(w).scale(-1.0)),
        oracle: None,
    })
}
