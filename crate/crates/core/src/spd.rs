//! Dense symmetric / symmetric-positive-definite matrix kernels.
//!
//! Everything else in the crate is built on two value types: [`SymMatrix`]
//! (exactly symmetric, symmetrized on construction) and [`SpdMatrix`]
//! (validated positive definite, with its eigendecomposition computed at
//! construction and a Cholesky factor cached lazily). Both are immutable;
//! `SpdMatrix` is cheaply clonable (`Arc`-backed) so factorizations are
//! shared rather than recomputed.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use std::sync::{Arc, OnceLock};
use thiserror::Error;

/// Relative eigenvalue floor used by [`SpdMatrix::new`]:
/// a symmetric matrix is accepted iff `lambda_min > SPD_TOL_REL * max(1, lambda_max)`.
pub const SPD_TOL_REL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SpdError {
    #[error("matrix is not positive definite (lambda_min = {lambda_min:.6e}, tolerance = {tolerance:.6e})")]
    NotPositiveDefinite { lambda_min: f64, tolerance: f64 },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
}

/// A real symmetric matrix. Inputs are symmetrized via `(M + M^T)/2` on
/// construction, so `entries[i][j] == entries[j][i]` holds exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    data: DMatrix<f64>,
}

impl SymMatrix {
    /// Symmetrize an arbitrary square matrix.
    ///
    /// # Panics
    /// Panics if `m` is not square.
    pub fn new(m: DMatrix<f64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "SymMatrix requires a square matrix");
        let mut data = m;
        let d = data.nrows();
        for i in 0..d {
            for j in (i + 1)..d {
                let avg = 0.5 * (data[(i, j)] + data[(j, i)]);
                data[(i, j)] = avg;
                data[(j, i)] = avg;
            }
        }
        SymMatrix { data }
    }

    /// Build from an entry function; the result is symmetrized.
    pub fn from_fn(d: usize, f: impl FnMut(usize, usize) -> f64) -> Self {
        SymMatrix::new(DMatrix::from_fn(d, d, f))
    }

    /// Wrap a matrix that is already exactly symmetric (diagonal matrices,
    /// results of `Q D Q^T` followed by symmetrization, ...).
    /// Debug builds verify the claim.
    pub(crate) fn from_exact(data: DMatrix<f64>) -> Self {
        debug_assert!(data == data.transpose(), "from_exact: matrix not symmetric");
        SymMatrix { data }
    }

    pub fn zeros(d: usize) -> Self {
        SymMatrix { data: DMatrix::zeros(d, d) }
    }

    pub fn identity(d: usize) -> Self {
        SymMatrix { data: DMatrix::identity(d, d) }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        SymMatrix { data: DMatrix::from_diagonal(&DVector::from_row_slice(diag)) }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.data
    }

    pub fn trace(&self) -> f64 {
        self.data.trace()
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn scale(&self, c: f64) -> SymMatrix {
        SymMatrix { data: &self.data * c }
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        SymMatrix { data: &self.data + &other.data }
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        SymMatrix { data: &self.data - &other.data }
    }

    /// Frobenius inner product `tr(A B)`.
    pub fn dot(&self, other: &SymMatrix) -> f64 {
        self.data.dot(&other.data)
    }
}

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted in
/// descending order and orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomp {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

/// Symmetric eigendecomposition, eigenvalues descending.
///
/// Satisfies `m == Q diag(values) Q^T` to working precision; the symmetric
/// eigenproblem always succeeds.
pub fn eig_sym(m: &SymMatrix) -> EigenDecomp {
    let se = m.data.clone().symmetric_eigen();
    let d = m.dim();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| se.eigenvalues[j].partial_cmp(&se.eigenvalues[i]).unwrap());
    let values = DVector::from_fn(d, |i, _| se.eigenvalues[order[i]]);
    let mut vectors = DMatrix::zeros(d, d);
    for (new_col, &old_col) in order.iter().enumerate() {
        vectors.set_column(new_col, &se.eigenvectors.column(old_col));
    }
    EigenDecomp { values, vectors }
}

struct SpdInner {
    sym: SymMatrix,
    eigen: EigenDecomp,
    chol: OnceLock<Cholesky<f64, Dyn>>,
}

/// A symmetric positive definite matrix.
///
/// Construction via [`SpdMatrix::new`] eigendecomposes the input and rejects
/// it unless `lambda_min > SPD_TOL_REL * max(1, lambda_max)`. The
/// factorization is kept for the lifetime of the value and reused by the
/// norm, metric and matrix-function operations; a Cholesky factor is computed
/// on first use. Values are immutable and cheap to clone.
#[derive(Clone)]
pub struct SpdMatrix {
    inner: Arc<SpdInner>,
}

impl PartialEq for SpdMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl std::fmt::Debug for SpdMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpdMatrix")
            .field("dim", &self.dim())
            .field("lambda_min", &self.lambda_min())
            .field("lambda_max", &self.lambda_max())
            .finish()
    }
}

impl SpdMatrix {
    /// Validated construction (`make_spd`).
    ///
    /// Returns an error carrying the offending `lambda_min` when the input is
    /// not positive definite under the relative tolerance.
    pub fn new(m: SymMatrix) -> Result<Self, SpdError> {
        let eigen = eig_sym(&m);
        let d = m.dim();
        let lambda_max = eigen.values[0];
        let lambda_min = eigen.values[d - 1];
        let tolerance = SPD_TOL_REL * lambda_max.max(1.0);
        if !(lambda_min > tolerance) {
            return Err(SpdError::NotPositiveDefinite { lambda_min, tolerance });
        }
        Ok(SpdMatrix {
            inner: Arc::new(SpdInner { sym: m, eigen, chol: OnceLock::new() }),
        })
    }

    /// Construction for matrices known to be positive definite by
    /// mathematical construction (Hilbert matrices, Gram matrices, iterates
    /// of SPD-preserving fixed-point maps). The eigendecomposition is still
    /// computed and cached, but the positivity tolerance of [`SpdMatrix::new`]
    /// is not enforced; the caller owns the claim. Numerically singular
    /// inputs (Hilbert at large `d`) are representable this way.
    pub fn assume_spd(m: SymMatrix) -> Self {
        let eigen = eig_sym(&m);
        SpdMatrix {
            inner: Arc::new(SpdInner { sym: m, eigen, chol: OnceLock::new() }),
        }
    }

    /// Construct from a known eigensystem; `values` must be descending.
    fn from_eigen(eigen: EigenDecomp) -> Self {
        let d = eigen.values.len();
        let scaled = scale_columns(&eigen.vectors, &eigen.values);
        let mut data = &scaled * eigen.vectors.transpose();
        symmetrize_in_place(&mut data);
        let _ = d;
        SpdMatrix {
            inner: Arc::new(SpdInner {
                sym: SymMatrix::from_exact(data),
                eigen,
                chol: OnceLock::new(),
            }),
        }
    }

    pub fn identity(d: usize) -> Self {
        SpdMatrix::scaled_identity(d, 1.0)
    }

    /// `c * I` for `c > 0`.
    pub fn scaled_identity(d: usize, c: f64) -> Self {
        assert!(c > 0.0, "scaled_identity requires c > 0");
        let eigen = EigenDecomp {
            values: DVector::from_element(d, c),
            vectors: DMatrix::identity(d, d),
        };
        SpdMatrix {
            inner: Arc::new(SpdInner {
                sym: SymMatrix::from_exact(DMatrix::identity(d, d) * c),
                eigen,
                chol: OnceLock::new(),
            }),
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self, SpdError> {
        SpdMatrix::new(SymMatrix::from_diagonal(diag))
    }

    pub fn dim(&self) -> usize {
        self.inner.sym.dim()
    }

    pub fn sym(&self) -> &SymMatrix {
        &self.inner.sym
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        self.inner.sym.as_matrix()
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.inner.eigen.values
    }

    /// Orthonormal eigenvectors, columns aligned with [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.inner.eigen.vectors
    }

    pub fn lambda_max(&self) -> f64 {
        self.inner.eigen.values[0]
    }

    pub fn lambda_min(&self) -> f64 {
        self.inner.eigen.values[self.dim() - 1]
    }

    /// `lambda_max / lambda_min`.
    pub fn condition_number(&self) -> f64 {
        self.lambda_max() / self.lambda_min()
    }

    pub fn trace(&self) -> f64 {
        self.inner.sym.trace()
    }

    pub fn frob_norm(&self) -> f64 {
        self.inner.sym.frob_norm()
    }

    fn chol(&self) -> &Cholesky<f64, Dyn> {
        self.inner.chol.get_or_init(|| {
            Cholesky::new(self.inner.sym.as_matrix().clone())
                .expect("SpdMatrix lost positive definiteness in Cholesky")
        })
    }

    /// `log det`, computed as `2 * sum(log diag(L))` from the Cholesky factor
    /// rather than through a determinant product.
    pub fn log_det(&self) -> f64 {
        chol_log_det_factor(self.chol())
    }

    /// `log det` for matrices that may be numerically singular (trusted
    /// constructions like large Hilbert matrices): `None` when the Cholesky
    /// factorization does not exist at working precision.
    pub fn try_log_det(&self) -> Option<f64> {
        if self.inner.chol.get().is_some() || self.lambda_min() > 0.0 {
            // cheap probe first so a failed factorization is not retried
            chol_log_det(self.inner.sym.as_matrix())
        } else {
            None
        }
    }

    /// Solve `A x = b` through the cached Cholesky factorization.
    pub fn solve(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        self.chol().solve(b)
    }

    pub fn solve_vec(&self, b: &DVector<f64>) -> DVector<f64> {
        self.chol().solve(b)
    }

    /// Inverse as a solve against the identity.
    pub fn inverse(&self) -> SpdMatrix {
        let d = self.dim();
        let mut inv = self.solve(&DMatrix::identity(d, d));
        symmetrize_in_place(&mut inv);
        SpdMatrix::assume_spd(SymMatrix::from_exact(inv))
    }

    /// Apply a scalar function to the spectrum: `Q diag(f(lambda)) Q^T`.
    pub fn mat_fn(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let vals = self.inner.eigen.values.map(f);
        let scaled = scale_columns(&self.inner.eigen.vectors, &vals);
        let mut out = &scaled * self.inner.eigen.vectors.transpose();
        symmetrize_in_place(&mut out);
        SymMatrix::from_exact(out)
    }

    /// Like [`Self::mat_fn`] but for functions with positive range, keeping the
    /// eigensystem so no re-decomposition is needed.
    fn mat_fn_spd(&self, f: impl Fn(f64) -> f64) -> SpdMatrix {
        let values = self.inner.eigen.values.map(f);
        // Positive transforms of a descending spectrum need re-sorting only
        // for non-monotone f; sort to keep the invariant.
        let d = self.dim();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap());
        let sorted_vals = DVector::from_fn(d, |i, _| values[order[i]]);
        let mut vectors = DMatrix::zeros(d, d);
        for (new_col, &old_col) in order.iter().enumerate() {
            vectors.set_column(new_col, &self.inner.eigen.vectors.column(old_col));
        }
        SpdMatrix::from_eigen(EigenDecomp { values: sorted_vals, vectors })
    }

    pub fn sqrt(&self) -> SpdMatrix {
        self.mat_fn_spd(f64::sqrt)
    }

    pub fn inv_sqrt(&self) -> SpdMatrix {
        self.mat_fn_spd(|x| 1.0 / x.sqrt())
    }

    /// Matrix logarithm (a symmetric matrix, not necessarily definite).
    pub fn log(&self) -> SymMatrix {
        self.mat_fn(f64::ln)
    }

    /// Fractional power `A^t`.
    pub fn powf(&self, t: f64) -> SpdMatrix {
        self.mat_fn_spd(|x| x.powf(t))
    }

    /// Congruence `M^{-1/2} other M^{-1/2}` symmetrized, a recurring kernel of
    /// the metric and geodesic formulas.
    pub fn whiten(&self, other: &SymMatrix) -> SymMatrix {
        let isq = self.inv_sqrt();
        let mut m = isq.as_matrix() * other.as_matrix() * isq.as_matrix();
        symmetrize_in_place(&mut m);
        SymMatrix::from_exact(m)
    }

    /// Exact structural equality (same entries).
    pub fn same_as(&self, other: &SpdMatrix) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.sym == other.inner.sym
    }
}

/// Validated construction of an SPD matrix from a symmetric one; alias of
/// [`SpdMatrix::new`] matching the operation vocabulary used elsewhere.
pub fn make_spd(m: SymMatrix) -> Result<SpdMatrix, SpdError> {
    SpdMatrix::new(m)
}

/// Cholesky of a raw symmetric matrix; `None` when not positive definite.
pub fn try_cholesky(m: &DMatrix<f64>) -> Option<Cholesky<f64, Dyn>> {
    Cholesky::new(m.clone())
}

/// `log det` from a raw symmetric positive definite matrix via Cholesky.
pub fn chol_log_det(m: &DMatrix<f64>) -> Option<f64> {
    try_cholesky(m).map(|c| chol_log_det_factor(&c))
}

fn chol_log_det_factor(chol: &Cholesky<f64, Dyn>) -> f64 {
    2.0 * chol.l_dirty().diagonal().iter().map(|x| x.ln()).sum::<f64>()
}

/// Symmetrized inverse of a raw SPD matrix via Cholesky solve against `I`.
pub fn chol_inverse(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let d = m.nrows();
    let chol = try_cholesky(m)?;
    let mut inv = chol.solve(&DMatrix::identity(d, d));
    symmetrize_in_place(&mut inv);
    Some(inv)
}

/// Fast positive-definiteness probe (Cholesky success).
pub fn is_pd(m: &DMatrix<f64>) -> bool {
    try_cholesky(m).is_some()
}

pub fn scale_columns(m: &DMatrix<f64>, scales: &DVector<f64>) -> DMatrix<f64> {
    let mut out = m.clone();
    for (j, mut col) in out.column_iter_mut().enumerate() {
        col *= scales[j];
    }
    out
}

pub(crate) fn symmetrize_in_place(m: &mut DMatrix<f64>) {
    let d = m.nrows();
    for i in 0..d {
        for j in (i + 1)..d {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    pub(crate) fn hilbert(d: usize) -> SymMatrix {
        SymMatrix::from_fn(d, |i, j| 1.0 / ((i + j + 1) as f64))
    }

    pub(crate) fn random_spd(d: usize, rng: &mut ChaCha12Rng) -> SpdMatrix {
        let g = DMatrix::from_fn(d, d, |_, _| rng.random::<f64>() - 0.5);
        let m = &g * g.transpose() + DMatrix::identity(d, d) * 0.1;
        SpdMatrix::new(SymMatrix::new(m)).unwrap()
    }

    #[test]
    fn identity_is_spd_with_unit_spectrum() {
        let a = SpdMatrix::new(SymMatrix::identity(3)).unwrap();
        for i in 0..3 {
            assert_relative_eq!(a.eigenvalues()[i], 1.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn indefinite_diagonal_is_rejected_with_lambda_min() {
        let err = SpdMatrix::from_diagonal(&[1.0, -1.0]).unwrap_err();
        match err {
            SpdError::NotPositiveDefinite { lambda_min, .. } => {
                assert_relative_eq!(lambda_min, -1.0, max_relative = 1e-12);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn hilbert_5_spectrum_matches_reference_eigensolver() {
        // Reference values from an independent eigensolver (SciPy eigvalsh).
        let h = SpdMatrix::new(hilbert(5)).unwrap();
        assert_relative_eq!(h.lambda_min(), 3.2879287722e-6, max_relative = 1e-6);
        assert_relative_eq!(h.condition_number(), 4.766073e5, max_relative = 1e-6);
    }

    #[test]
    fn hilbert_10_needs_trusted_construction_and_is_worse_conditioned() {
        // lambda_min(H_10) ~ 1.09e-13 sits below the relative tolerance, so
        // validated construction refuses it while the trusted path admits it.
        assert!(SpdMatrix::new(hilbert(10)).is_err());
        let h10 = SpdMatrix::assume_spd(hilbert(10));
        let h5 = SpdMatrix::new(hilbert(5)).unwrap();
        assert!(h10.condition_number() > h5.condition_number());
    }

    #[test]
    fn eig_sym_diagonal_is_sorted_descending() {
        let e = eig_sym(&SymMatrix::from_diagonal(&[2.0, 5.0, 1.0]));
        assert_relative_eq!(e.values[0], 5.0, max_relative = 1e-14);
        assert_relative_eq!(e.values[1], 2.0, max_relative = 1e-14);
        assert_relative_eq!(e.values[2], 1.0, max_relative = 1e-14);
        // permutation matrix: exactly one +-1 entry per column
        for j in 0..3 {
            let col = e.vectors.column(j);
            let big: Vec<f64> = col.iter().cloned().filter(|x| x.abs() > 0.5).collect();
            assert_eq!(big.len(), 1);
            assert_relative_eq!(big[0].abs(), 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn eig_sym_textbook_2x2() {
        let m = SymMatrix::from_fn(2, |i, j| if i == j { 2.0 } else { 1.0 });
        let e = eig_sym(&m);
        assert_relative_eq!(e.values[0], 3.0, max_relative = 1e-14);
        assert_relative_eq!(e.values[1], 1.0, max_relative = 1e-14);
        let s = 1.0 / 2.0_f64.sqrt();
        let v0 = e.vectors.column(0);
        assert_relative_eq!((v0[0] * v0[1]).abs(), s * s, max_relative = 1e-12);
    }

    #[test]
    fn eig_sym_reconstructs_input() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..10 {
            let m = SymMatrix::from_fn(6, |_, _| rng.random::<f64>() - 0.5);
            let e = eig_sym(&m);
            let rec = &e.vectors * DMatrix::from_diagonal(&e.values) * e.vectors.transpose();
            let err = (&rec - m.as_matrix()).norm();
            assert!(err <= 1e-10 * m.frob_norm().max(1.0), "reconstruction error {err}");
            let q_orth = (e.vectors.transpose() * &e.vectors - DMatrix::identity(6, 6)).norm();
            assert!(q_orth <= 1e-10 * 6.0);
        }
    }

    #[test]
    fn mat_fn_diagonal_examples() {
        let a = SpdMatrix::from_diagonal(&[4.0, 9.0]).unwrap();
        let s = a.mat_fn(f64::sqrt);
        assert_relative_eq!(s.as_matrix()[(0, 0)], 2.0, max_relative = 1e-14);
        assert_relative_eq!(s.as_matrix()[(1, 1)], 3.0, max_relative = 1e-14);

        let i = SpdMatrix::identity(4);
        assert!(i.log().frob_norm() < 1e-14);

        let e1 = std::f64::consts::E;
        let a = SpdMatrix::from_diagonal(&[e1, e1 * e1]).unwrap();
        let l = a.log();
        assert_relative_eq!(l.as_matrix()[(0, 0)] + l.as_matrix()[(1, 1)], 3.0, max_relative = 1e-12);
    }

    #[test]
    fn log_exp_roundtrip_on_random_spd() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..10 {
            let a = random_spd(8, &mut rng);
            let log = a.log();
            let e = eig_sym(&log);
            let back = &e.vectors
                * DMatrix::from_diagonal(&e.values.map(f64::exp))
                * e.vectors.transpose();
            let rel = (&back - a.as_matrix()).norm() / a.frob_norm();
            assert!(rel <= 1e-8, "log/exp roundtrip rel err {rel}");
        }
    }

    #[test]
    fn sqrt_squares_back() {
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        for _ in 0..10 {
            let a = random_spd(10, &mut rng);
            let r = a.sqrt();
            let sq = r.as_matrix() * r.as_matrix();
            let rel = (&sq - a.as_matrix()).norm() / a.frob_norm();
            assert!(rel <= 1e-8, "sqrt square rel err {rel}");
        }
    }

    #[test]
    fn solve_examples_and_inverse() {
        let i3 = SpdMatrix::identity(3);
        let b = DMatrix::from_row_slice(3, 2, &[1., 2., 3., 4., 5., 6.]);
        assert!((i3.solve(&b) - &b).norm() < 1e-14);

        let a = SpdMatrix::from_diagonal(&[2.0, 4.0]).unwrap();
        let inv = a.inverse();
        assert_relative_eq!(inv.as_matrix()[(0, 0)], 0.5, max_relative = 1e-14);
        assert_relative_eq!(inv.as_matrix()[(1, 1)], 0.25, max_relative = 1e-14);

        let a = SpdMatrix::new(SymMatrix::from_fn(2, |i, j| if i == j { 2.0 } else { 1.0 })).unwrap();
        let x = a.solve_vec(&DVector::from_row_slice(&[1.0, 1.0]));
        assert_relative_eq!(x[0], 1.0 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(x[1], 1.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn solve_recovers_random_rhs() {
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        for _ in 0..10 {
            let a = random_spd(9, &mut rng);
            let x = DMatrix::from_fn(9, 3, |_, _| rng.random::<f64>() - 0.5);
            let b = a.as_matrix() * &x;
            let rel = (a.solve(&b) - &x).norm() / x.norm();
            assert!(rel <= 1e-8, "solve rel err {rel}");
        }
    }

    #[test]
    fn condition_number_examples() {
        assert_relative_eq!(SpdMatrix::identity(5).condition_number(), 1.0, max_relative = 1e-14);
        let a = SpdMatrix::from_diagonal(&[10.0, 1.0]).unwrap();
        assert_relative_eq!(a.condition_number(), 10.0, max_relative = 1e-14);
    }

    #[test]
    fn weyl_condition_bound_holds_on_random_pairs() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for _ in 0..50 {
            let a = random_spd(7, &mut rng);
            let b = random_spd(7, &mut rng);
            let sum = SpdMatrix::new(a.sym().add(b.sym())).unwrap();
            let bound = (a.lambda_max() + b.lambda_max()) / (a.lambda_min() + b.lambda_min());
            assert!(sum.condition_number() <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn log_det_matches_eigenvalue_sum() {
        let mut rng = ChaCha12Rng::seed_from_u64(29);
        let a = random_spd(12, &mut rng);
        let via_eig: f64 = a.eigenvalues().iter().map(|l| l.ln()).sum();
        assert_relative_eq!(a.log_det(), via_eig, max_relative = 1e-10);
    }

    #[test]
    fn symmetrization_guards_asymmetric_input() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.1, 1.0]);
        let s = SymMatrix::new(m);
        assert_eq!(s.as_matrix()[(0, 1)], s.as_matrix()[(1, 0)]);
        assert_relative_eq!(s.as_matrix()[(0, 1)], 0.2, max_relative = 1e-15);
    }
}
