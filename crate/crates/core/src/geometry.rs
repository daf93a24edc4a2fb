//! Affine-invariant Riemannian geometry of the SPD cone: geodesics and
//! geometric means, the metric, exponential map, Riemannian gradients,
//! parallel transport and the metric inner product.
//!
//! Under the affine-invariant inner product `<U, V>_X = tr(X^-1 U X^-1 V)`
//! the cone is Cartan-Hadamard, so geodesics between any two points are
//! unique and the exponential map is globally defined.

use crate::spd::{eig_sym, symmetrize_in_place, SpdMatrix, SymMatrix};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("geodesic parameter t = {0} outside [0, 1]")]
    DomainError(f64),
    #[error("tangent vector is based at a different point")]
    BasePointMismatch,
}

/// A tangent vector: a symmetric direction attached to a base point.
#[derive(Clone, Debug)]
pub struct TangentVector {
    pub base: SpdMatrix,
    pub dir: SymMatrix,
}

impl TangentVector {
    pub fn new(base: SpdMatrix, dir: SymMatrix) -> Self {
        assert_eq!(base.dim(), dir.dim(), "tangent direction dimension mismatch");
        TangentVector { base, dir }
    }

    fn check_base(&self, x: &SpdMatrix) -> Result<(), GeometryError> {
        if self.base.same_as(x) {
            Ok(())
        } else {
            Err(GeometryError::BasePointMismatch)
        }
    }
}

/// The weighted geometric mean curve `A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}`
/// for `t` in `[0, 1]`; `t = 0` gives `a`, `t = 1` gives `b`.
pub fn geodesic(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<SpdMatrix, GeometryError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(GeometryError::DomainError(t));
    }
    if t == 0.0 {
        return Ok(a.clone());
    }
    if t == 1.0 {
        return Ok(b.clone());
    }
    let sq = a.sqrt();
    let inner = SpdMatrix::assume_spd(a.whiten(b.sym()));
    let powed = inner.powf(t);
    let mut out = sq.as_matrix() * powed.as_matrix() * sq.as_matrix();
    symmetrize_in_place(&mut out);
    Ok(SpdMatrix::assume_spd(SymMatrix::new(out)))
}

/// Midpoint of the geodesic, `A # B`.
pub fn geometric_mean(a: &SpdMatrix, b: &SpdMatrix) -> SpdMatrix {
    geodesic(a, b, 0.5).expect("t = 1/2 is always in range")
}

/// Weighted geometric mean `A #_t B` (alias of [`geodesic`]).
pub fn geometric_mean_t(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<SpdMatrix, GeometryError> {
    geodesic(a, b, t)
}

/// Affine-invariant Riemannian distance
/// `delta_R(A, B) = || log(A^{-1/2} B A^{-1/2}) ||_F`,
/// computed from one eigendecomposition of the symmetrized congruence.
pub fn riem_dist(a: &SpdMatrix, b: &SpdMatrix) -> f64 {
    if a.same_as(b) {
        return 0.0;
    }
    let m = a.whiten(b.sym());
    let eig = eig_sym(&m);
    eig.values.iter().map(|l| l.ln().powi(2)).sum::<f64>().sqrt()
}

/// Exponential map `Exp_X(t V) = X^{1/2} exp(t X^{-1/2} V X^{-1/2}) X^{1/2}`.
/// Complete: the result is SPD for every `t`.
pub fn exp_map(x: &SpdMatrix, v: &TangentVector, t: f64) -> Result<SpdMatrix, GeometryError> {
    v.check_base(x)?;
    let sq = x.sqrt();
    let whitened = x.whiten(&v.dir);
    let eig = eig_sym(&whitened);
    let expd = crate::spd::scale_columns(&eig.vectors, &eig.values.map(|l| (t * l).exp()))
        * eig.vectors.transpose();
    let mut out = sq.as_matrix() * expd * sq.as_matrix();
    symmetrize_in_place(&mut out);
    Ok(SpdMatrix::assume_spd(SymMatrix::new(out)))
}

/// Riemannian gradient from a Euclidean gradient: `grad = X egrad X`.
pub fn riem_grad(x: &SpdMatrix, egrad: &SymMatrix) -> TangentVector {
    let mut dir = x.as_matrix() * egrad.as_matrix() * x.as_matrix();
    symmetrize_in_place(&mut dir);
    TangentVector::new(x.clone(), SymMatrix::new(dir))
}

/// Parallel transport along the geodesic from `from` to `to`:
/// `V' = E V E^T` with `E = (to from^{-1})^{1/2}`, computed through the
/// symmetrized similarity `from^{-1/2} to from^{-1/2}` so only symmetric
/// eigendecompositions are involved. Preserves the affine-invariant inner
/// product.
pub fn parallel_transport(
    from: &SpdMatrix,
    to: &SpdMatrix,
    v: &TangentVector,
) -> Result<TangentVector, GeometryError> {
    v.check_base(from)?;
    if from.same_as(to) {
        return Ok(TangentVector::new(to.clone(), v.dir.clone()));
    }
    // E = (to from^{-1})^{1/2} = from^{1/2} M^{1/2} from^{-1/2},
    // M = from^{-1/2} to from^{-1/2}
    let sq = from.sqrt();
    let isq = from.inv_sqrt();
    let m = SpdMatrix::assume_spd(from.whiten(to.sym()));
    let e = sq.as_matrix() * m.sqrt().as_matrix() * isq.as_matrix();
    let mut out = &e * v.dir.as_matrix() * e.transpose();
    symmetrize_in_place(&mut out);
    Ok(TangentVector::new(to.clone(), SymMatrix::new(out)))
}

/// Affine-invariant inner product `<U, V>_X = tr(X^{-1} U X^{-1} V)`.
pub fn inner_affine(x: &SpdMatrix, u: &TangentVector, v: &TangentVector) -> Result<f64, GeometryError> {
    u.check_base(x)?;
    v.check_base(x)?;
    let xu = x.solve(u.dir.as_matrix());
    let xv = x.solve(v.dir.as_matrix());
    Ok((xu * xv).trace())
}

/// Riemannian norm induced by [`inner_affine`].
pub fn riem_norm(x: &SpdMatrix, v: &TangentVector) -> Result<f64, GeometryError> {
    Ok(inner_affine(x, v, v)?.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spd::SpdMatrix;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn random_spd(d: usize, rng: &mut ChaCha12Rng) -> SpdMatrix {
        let g = DMatrix::from_fn(d, d, |_, _| rng.random::<f64>() - 0.5);
        let m = &g * g.transpose() + DMatrix::identity(d, d) * 0.1;
        SpdMatrix::new(SymMatrix::new(m)).unwrap()
    }

    fn random_sym(d: usize, rng: &mut ChaCha12Rng) -> SymMatrix {
        SymMatrix::from_fn(d, |_, _| rng.random::<f64>() - 0.5)
    }

    #[test]
    fn geodesic_endpoints_and_commuting_midpoint() {
        let a = SpdMatrix::from_diagonal(&[1.0, 4.0]).unwrap();
        let b = SpdMatrix::from_diagonal(&[4.0, 1.0]).unwrap();
        assert!(geodesic(&a, &b, 0.0).unwrap().same_as(&a));
        assert!(geodesic(&a, &b, 1.0).unwrap().same_as(&b));
        let mid = geodesic(&a, &b, 0.5).unwrap();
        assert_relative_eq!(mid.as_matrix()[(0, 0)], 2.0, max_relative = 1e-12);
        assert_relative_eq!(mid.as_matrix()[(1, 1)], 2.0, max_relative = 1e-12);
        assert!(geodesic(&a, &b, 1.5).is_err());
        assert!(geodesic(&a, &b, -0.1).is_err());
    }

    #[test]
    fn geodesic_from_identity_is_fractional_power() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let b = random_spd(5, &mut rng);
        let i = SpdMatrix::identity(5);
        let g = geodesic(&i, &b, 0.3).unwrap();
        let p = b.powf(0.3);
        assert!((g.as_matrix() - p.as_matrix()).norm() <= 1e-10 * p.frob_norm());
    }

    #[test]
    fn geometric_mean_fixed_point_and_scalars() {
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let a = random_spd(4, &mut rng);
        let m = geometric_mean(&a, &a);
        assert!((m.as_matrix() - a.as_matrix()).norm() <= 1e-10 * a.frob_norm());

        let one = SpdMatrix::from_diagonal(&[1.0]).unwrap();
        let nine = SpdMatrix::from_diagonal(&[9.0]).unwrap();
        assert_relative_eq!(geometric_mean(&one, &nine).as_matrix()[(0, 0)], 3.0, max_relative = 1e-12);
    }

    #[test]
    fn geometric_mean_is_symmetric_in_arguments() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_spd(5, &mut rng);
            let b = random_spd(5, &mut rng);
            let ab = geometric_mean(&a, &b);
            let ba = geometric_mean(&b, &a);
            let rel = (ab.as_matrix() - ba.as_matrix()).norm() / ab.frob_norm();
            assert!(rel <= 1e-9, "midpoint symmetry violated: {rel}");
        }
    }

    #[test]
    fn riem_dist_examples() {
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        let a = random_spd(6, &mut rng);
        assert_eq!(riem_dist(&a, &a), 0.0);

        let i = SpdMatrix::identity(2);
        let ei = SpdMatrix::scaled_identity(2, std::f64::consts::E);
        assert_relative_eq!(riem_dist(&i, &ei), 2f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn riem_dist_inversion_invariance() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        for _ in 0..10 {
            let a = random_spd(5, &mut rng);
            let b = random_spd(5, &mut rng);
            let d1 = riem_dist(&a, &b);
            let d2 = riem_dist(&a.inverse(), &b.inverse());
            assert_relative_eq!(d1, d2, max_relative = 1e-8);
        }
    }

    #[test]
    fn riem_dist_congruence_invariance() {
        let mut rng = ChaCha12Rng::seed_from_u64(10);
        for _ in 0..10 {
            let a = random_spd(5, &mut rng);
            let b = random_spd(5, &mut rng);
            let m = DMatrix::from_fn(5, 5, |_, _| rng.random::<f64>() - 0.5)
                + DMatrix::identity(5, 5) * 2.0;
            let ca = SpdMatrix::new(SymMatrix::new(&m * a.as_matrix() * m.transpose())).unwrap();
            let cb = SpdMatrix::new(SymMatrix::new(&m * b.as_matrix() * m.transpose())).unwrap();
            assert_relative_eq!(riem_dist(&ca, &cb), riem_dist(&a, &b), max_relative = 1e-8);
        }
    }

    #[test]
    fn geodesic_parameter_is_metric_affine() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..10 {
            let a = random_spd(4, &mut rng);
            let b = random_spd(4, &mut rng);
            let (t, s) = (rng.random::<f64>(), rng.random::<f64>());
            let gt = geodesic(&a, &b, t).unwrap();
            let gs = geodesic(&a, &b, s).unwrap();
            let lhs = riem_dist(&gt, &gs);
            let rhs = (t - s).abs() * riem_dist(&a, &b);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-8, epsilon = 1e-10);
        }
    }

    #[test]
    fn exp_map_examples() {
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        let x = random_spd(4, &mut rng);
        let v = TangentVector::new(x.clone(), random_sym(4, &mut rng));
        let at_zero = exp_map(&x, &v, 0.0).unwrap();
        assert!((at_zero.as_matrix() - x.as_matrix()).norm() <= 1e-12 * x.frob_norm());

        // X = I reduces to the matrix exponential
        let i = SpdMatrix::identity(4);
        let w = TangentVector::new(i.clone(), random_sym(4, &mut rng));
        let via_map = exp_map(&i, &w, 1.0).unwrap();
        let e = crate::spd::eig_sym(&w.dir);
        let direct = crate::spd::scale_columns(&e.vectors, &e.values.map(f64::exp))
            * e.vectors.transpose();
        assert!((via_map.as_matrix() - &direct).norm() <= 1e-10 * direct.norm());

        // d=1 scalar: Exp_2(t=1; v=2) = 2 e^{2/2}
        let x1 = SpdMatrix::from_diagonal(&[2.0]).unwrap();
        let v1 = TangentVector::new(x1.clone(), SymMatrix::from_diagonal(&[2.0]));
        let y = exp_map(&x1, &v1, 1.0).unwrap();
        assert_relative_eq!(y.as_matrix()[(0, 0)], 2.0 * std::f64::consts::E, max_relative = 1e-12);

        // base point mismatch
        let other = random_spd(4, &mut rng);
        assert!(matches!(exp_map(&other, &v, 1.0), Err(GeometryError::BasePointMismatch)));
    }

    #[test]
    fn exp_map_stays_spd_for_large_steps() {
        // The gradient is scaled so eta * lambda stays inside f64 exp range;
        // the point is that arbitrarily long retractions stay on the manifold.
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        let x = random_spd(5, &mut rng);
        let egrad = random_sym(5, &mut rng).scale(1e-4);
        let g = riem_grad(&x, &egrad);
        for &eta in &[1e-3, 1.0, 1e3] {
            let y = exp_map(&x, &g, -eta).unwrap();
            assert!(y.lambda_min() > 0.0, "exp_map left SPD at eta={eta}");
        }
    }

    #[test]
    fn riem_grad_examples() {
        let mut rng = ChaCha12Rng::seed_from_u64(14);
        let egrad = random_sym(4, &mut rng);
        let i = SpdMatrix::identity(4);
        let g = riem_grad(&i, &egrad);
        assert!((g.dir.as_matrix() - egrad.as_matrix()).norm() <= 1e-14);

        let x = SpdMatrix::from_diagonal(&[3.0]).unwrap();
        let g = riem_grad(&x, &SymMatrix::from_diagonal(&[2.0]));
        assert_relative_eq!(g.dir.as_matrix()[(0, 0)], 18.0, max_relative = 1e-14);

        // for phi = tr(X), egrad = I and grad = X^2
        let x = random_spd(4, &mut rng);
        let g = riem_grad(&x, &SymMatrix::identity(4));
        let x2 = x.as_matrix() * x.as_matrix();
        assert!((g.dir.as_matrix() - &x2).norm() <= 1e-12 * x2.norm());
    }

    #[test]
    fn parallel_transport_identity_cases_and_scalar() {
        let mut rng = ChaCha12Rng::seed_from_u64(15);
        let x = random_spd(4, &mut rng);
        let v = TangentVector::new(x.clone(), random_sym(4, &mut rng));
        let moved = parallel_transport(&x, &x, &v).unwrap();
        assert!((moved.dir.as_matrix() - v.dir.as_matrix()).norm() <= 1e-14);

        // d=1: E = (to/from)^{1/2} = 2, transported = E v E = 12;
        // preserves <v,v>: 3^2/1^2 at from == 12^2/4^2 at to.
        let from = SpdMatrix::from_diagonal(&[1.0]).unwrap();
        let to = SpdMatrix::from_diagonal(&[4.0]).unwrap();
        let v = TangentVector::new(from.clone(), SymMatrix::from_diagonal(&[3.0]));
        let tv = parallel_transport(&from, &to, &v).unwrap();
        assert_relative_eq!(tv.dir.as_matrix()[(0, 0)], 12.0, max_relative = 1e-12);
        let before = inner_affine(&from, &v, &v).unwrap();
        let after = inner_affine(&to, &tv, &tv).unwrap();
        assert_relative_eq!(before, after, max_relative = 1e-12);
    }

    #[test]
    fn parallel_transport_preserves_inner_product() {
        let mut rng = ChaCha12Rng::seed_from_u64(16);
        for _ in 0..10 {
            let from = random_spd(5, &mut rng);
            let to = random_spd(5, &mut rng);
            let u = TangentVector::new(from.clone(), random_sym(5, &mut rng));
            let v = TangentVector::new(from.clone(), random_sym(5, &mut rng));
            let tu = parallel_transport(&from, &to, &u).unwrap();
            let tv = parallel_transport(&from, &to, &v).unwrap();
            let before = inner_affine(&from, &u, &v).unwrap();
            let after = inner_affine(&to, &tu, &tv).unwrap();
            assert_relative_eq!(before, after, max_relative = 1e-8);
        }
    }

    #[test]
    fn inner_affine_examples() {
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        // at X = I the inner product is tr(UV)
        let i = SpdMatrix::identity(4);
        let u = TangentVector::new(i.clone(), random_sym(4, &mut rng));
        let v = TangentVector::new(i.clone(), random_sym(4, &mut rng));
        let direct = (u.dir.as_matrix() * v.dir.as_matrix()).trace();
        assert_relative_eq!(inner_affine(&i, &u, &v).unwrap(), direct, max_relative = 1e-12);

        // positivity
        let x = random_spd(4, &mut rng);
        let w = TangentVector::new(x.clone(), random_sym(4, &mut rng));
        assert!(inner_affine(&x, &w, &w).unwrap() > 0.0);

        // d=1: x=2, u=4, v=6 -> 4*6/4 = 6
        let x1 = SpdMatrix::from_diagonal(&[2.0]).unwrap();
        let u1 = TangentVector::new(x1.clone(), SymMatrix::from_diagonal(&[4.0]));
        let v1 = TangentVector::new(x1.clone(), SymMatrix::from_diagonal(&[6.0]));
        assert_relative_eq!(inner_affine(&x1, &u1, &v1).unwrap(), 6.0, max_relative = 1e-12);
    }
}
