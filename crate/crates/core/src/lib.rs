//! Optimization on the manifold of symmetric positive definite matrices with
//! structured regularizers.
//!
//! The crate is organized around a small set of layers:
//!
//! * [`spd`] — dense symmetric/SPD matrix kernels (eigendecomposition,
//!   Cholesky, functions of matrices, validated construction).
//! * [`geometry`] — the affine-invariant Riemannian geometry of the SPD cone:
//!   geodesics, the metric, exponential map, gradients, parallel transport.
//! * [`gauge`] — symmetric gauge functions on the spectrum, their algebra
//!   (scaling, sums, duals, lp-transforms), the induced unitarily invariant
//!   norms and the induced metrics on the cone.
//! * [`regularizers`] — concrete penalties: S-divergence balls, smooth
//!   Schatten functions, diagonal loading, log-det barriers, gauge norms.
//! * [`objectives`] — difference-of-convex objective builders for square
//!   roots, Karcher means, optimistic likelihoods and SPD regression.
//! * [`solvers`] — the generic CCCP loop (closed-form oracle or inner
//!   gradient descent), the fixed-point specializations, and Riemannian
//!   GD/CG baselines with Armijo line search.
//! * [`gcheck`] — a rule-based geodesic-convexity/DC certifier over a small
//!   expression AST, with a randomized numeric audit.
//! * [`io`] — the plain-text matrix and dataset formats used by fixtures and
//!   the benchmark CLI.

pub mod gauge;
pub mod gcheck;
pub mod geometry;
pub mod io;
pub mod objectives;
pub mod regularizers;
pub mod solvers;
pub mod spd;
#[doc(hidden)]
pub mod testkit;

pub use spd::{SpdError, SpdMatrix, SymMatrix};
