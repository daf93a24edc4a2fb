//! Rule-based geodesic-convexity / DC certification over an expression AST.
//!
//! Expressions are scalar functions on the SPD cone built from a fixed atom
//! table (log-det, traces, spectral gauge norms, quadratic forms, log
//! quadratic sums, gauge-metric distances, the S-divergence) and
//! curvature-preserving combinators (nonnegative combinations, maxima,
//! composition with a small catalog of scalar functions, inverse
//! substitution, positive affine substitution). [`certify`] labels each tree
//! with geodesic curvature, Euclidean curvature and — when available — a
//! symbolic difference-of-convex split whose parts evaluate and sum back to
//! the original.
//!
//! The checker is sound but deliberately incomplete: a non-`Unknown` label is
//! backed by a rule chain (returned as a proof trace), while `Unknown` means
//! "not certified", never "refuted". [`numeric_audit`] is the randomized
//! falsification guard for whatever the rules claim.
//!
//! Operator-valued atoms (the identity map, Hadamard multipliers) appear as
//! positive-affine map descriptors inside substitutions rather than as
//! standalone scalar nodes, since verdicts here track scalar curvature only.

mod parse;

pub use parse::parse_expr;

use crate::gauge::{gauge_dist, GaugeFunction};
use crate::geometry::geometric_mean;
use crate::spd::{eig_sym, SpdMatrix, SymMatrix};
use crate::testkit::random_spd;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GcheckError {
    #[error("combine_table requires both inputs to be at least g-convex")]
    NotGConvexInput,
    #[error("expression parse error: {0}")]
    Parse(String),
    #[error("invalid expression: {0}")]
    InvalidExpr(String),
}

/// Scalar functions admitted by `ScalarCompose`, each with machine-checkable
/// convexity/monotonicity tags. Arbitrary user scalars are rejected by
/// construction.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarFn {
    Exp,
    /// `t -> |t|^p`, `p >= 1`; nondecreasing only on the nonnegative axis.
    AbsPow(f64),
    Identity,
    /// `t -> t^beta` on nonnegative inputs, `beta >= 1`.
    PowPos(f64),
}

impl ScalarFn {
    pub fn apply(&self, t: f64) -> f64 {
        match self {
            ScalarFn::Exp => t.exp(),
            ScalarFn::AbsPow(p) => t.abs().powf(*p),
            ScalarFn::Identity => t,
            ScalarFn::PowPos(b) => t.powf(*b),
        }
    }

    fn validate(&self) -> Result<(), GcheckError> {
        match self {
            ScalarFn::AbsPow(p) if *p < 1.0 => {
                Err(GcheckError::InvalidExpr(format!("abspow exponent {p} < 1")))
            }
            ScalarFn::PowPos(b) if *b < 1.0 => {
                Err(GcheckError::InvalidExpr(format!("powpos exponent {b} < 1")))
            }
            _ => Ok(()),
        }
    }

    /// (euclidean convex, nondecreasing globally, nondecreasing on R+,
    /// requires nonnegative input)
    fn tags(&self) -> (bool, bool, bool, bool) {
        match self {
            ScalarFn::Exp => (true, true, true, false),
            ScalarFn::AbsPow(_) => (true, false, true, false),
            ScalarFn::Identity => (true, true, true, false),
            ScalarFn::PowPos(_) => (true, false, true, true),
        }
    }
}

/// Positive affine map descriptors `X -> Phi(X) + B` with `Phi` positive
/// linear and `B` positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub enum PositiveAffineMap {
    /// `X -> M (.) X` (Hadamard product; `M` PSD with no zero rows, hence a
    /// strictly positive linear map).
    Hadamard(SymMatrix),
    /// `X -> E X E^T` for an `m x d` matrix `E`.
    Congruence(DMatrix<f64>),
    /// `X -> c X`, `c > 0`.
    Scale(f64),
    /// `X -> X + B`, `B` PSD.
    Shift(SymMatrix),
    /// Left-to-right composition.
    Chain(Vec<PositiveAffineMap>),
}

impl PositiveAffineMap {
    pub fn apply(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        match self {
            PositiveAffineMap::Hadamard(m) => x.component_mul(m.as_matrix()),
            PositiveAffineMap::Congruence(e) => e * x * e.transpose(),
            PositiveAffineMap::Scale(c) => x * *c,
            PositiveAffineMap::Shift(b) => x + b.as_matrix(),
            PositiveAffineMap::Chain(maps) => {
                let mut cur = x.clone();
                for m in maps {
                    cur = m.apply(&cur);
                }
                cur
            }
        }
    }

    pub fn out_dim(&self, in_dim: usize) -> usize {
        match self {
            PositiveAffineMap::Congruence(e) => e.nrows(),
            PositiveAffineMap::Chain(maps) => {
                maps.iter().fold(in_dim, |d, m| m.out_dim(d))
            }
            _ => in_dim,
        }
    }

    fn validate(&self, in_dim: usize) -> Result<(), GcheckError> {
        match self {
            PositiveAffineMap::Hadamard(m) => {
                if m.dim() != in_dim {
                    return Err(GcheckError::InvalidExpr("hadamard multiplier dimension mismatch".into()));
                }
                let eig = eig_sym(m);
                if eig.values[m.dim() - 1] < -1e-10 * eig.values[0].max(1.0) {
                    return Err(GcheckError::InvalidExpr("hadamard multiplier must be PSD".into()));
                }
                for i in 0..m.dim() {
                    if m.as_matrix().row(i).iter().all(|v| *v == 0.0) {
                        return Err(GcheckError::InvalidExpr("hadamard multiplier has a zero row".into()));
                    }
                }
            }
            PositiveAffineMap::Congruence(e) => {
                if e.ncols() != in_dim {
                    return Err(GcheckError::InvalidExpr("congruence factor dimension mismatch".into()));
                }
            }
            PositiveAffineMap::Scale(c) => {
                if !(*c > 0.0) {
                    return Err(GcheckError::InvalidExpr(format!("scale factor {c} must be > 0")));
                }
            }
            PositiveAffineMap::Shift(b) => {
                if b.dim() != in_dim {
                    return Err(GcheckError::InvalidExpr("shift dimension mismatch".into()));
                }
                let eig = eig_sym(b);
                if eig.values[b.dim() - 1] < -1e-10 * eig.values[0].abs().max(1.0) {
                    return Err(GcheckError::InvalidExpr("shift must be PSD".into()));
                }
            }
            PositiveAffineMap::Chain(maps) => {
                let mut d = in_dim;
                for m in maps {
                    m.validate(d)?;
                    d = m.out_dim(d);
                }
            }
        }
        Ok(())
    }
}

/// Scalar-valued expressions over the SPD cone.
#[derive(Clone, Debug, PartialEq)]
pub enum CurvatureExpr {
    Const(f64),
    /// `log det X` (g-linear).
    LogDet,
    /// `tr X`.
    Trace,
    /// `tr(S X)` for PSD `S`.
    TraceWith(SymMatrix),
    /// `Phi(lambda(X))` for a symmetric gauge function.
    SgNorm(GaugeFunction),
    /// `y^T X^{+-1} y` for nonzero `y` (strictly g-convex).
    QuadForm { y: DVector<f64>, inverse: bool },
    /// `log(offset + sum_i h_i^T X^{+-1} h_i)`, `offset >= 0` (strictly
    /// g-convex; the offset is absorbed by a block positive-affine embedding,
    /// which is how the multivariate-t term enters).
    LogQuadSum { hs: Vec<DVector<f64>>, inverse: bool, offset: f64 },
    /// `d_Phi(X, anchor)^alpha`, `alpha >= 1`.
    GaugeDistTo { phi: GaugeFunction, anchor: SpdMatrix, alpha: f64 },
    /// `delta_S^2(X, anchor)`.
    SDivTo { anchor: SpdMatrix },
    /// `sum_ij |X_ij|`; Euclidean convex but not g-convex — stays uncertified
    /// in geodesic curvature by design.
    EntrywiseL1,
    Negate(Box<CurvatureExpr>),
    /// `sum_i w_i e_i` with `w_i >= 0`.
    NonnegCombo(Vec<(f64, CurvatureExpr)>),
    MaxOf(Vec<CurvatureExpr>),
    ScalarCompose { func: ScalarFn, child: Box<CurvatureExpr> },
    /// `child(X^{-1})`.
    InverseSub(Box<CurvatureExpr>),
    /// `child(map(X))`.
    AffineSub { map: PositiveAffineMap, child: Box<CurvatureExpr> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GCurvature {
    GLinear,
    StrictlyGConvex,
    GConvex,
    GConcave,
    Unknown,
}

impl GCurvature {
    pub fn is_convex(self) -> bool {
        matches!(self, GCurvature::GLinear | GCurvature::StrictlyGConvex | GCurvature::GConvex)
    }

    pub fn is_concave(self) -> bool {
        matches!(self, GCurvature::GLinear | GCurvature::GConcave)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ECurvature {
    /// Both Euclidean convex and concave (affine in X).
    ELinear,
    EConvex,
    EConcave,
    Unknown,
}

impl ECurvature {
    pub fn is_convex(self) -> bool {
        matches!(self, ECurvature::ELinear | ECurvature::EConvex)
    }

    pub fn is_concave(self) -> bool {
        matches!(self, ECurvature::ELinear | ECurvature::EConcave)
    }
}

/// Monotonicity with respect to the Loewner order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Monotonicity {
    Nondecreasing,
    Nonincreasing,
    Unknown,
}

impl Monotonicity {
    fn flip(self) -> Self {
        match self {
            Monotonicity::Nondecreasing => Monotonicity::Nonincreasing,
            Monotonicity::Nonincreasing => Monotonicity::Nondecreasing,
            Monotonicity::Unknown => Monotonicity::Unknown,
        }
    }
}

/// Certified curvature labels plus an optional symbolic DC split
/// `(convex part, concave part)` with `value = convex + concave`.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub g_curvature: GCurvature,
    pub e_curvature: ECurvature,
    pub dc_split: Option<(CurvatureExpr, CurvatureExpr)>,
}

impl Verdict {
    pub fn is_dc(&self) -> bool {
        self.dc_split.is_some()
    }

    pub fn describe(&self) -> String {
        let g = match self.g_curvature {
            GCurvature::GLinear => "g-linear",
            GCurvature::StrictlyGConvex => "strictly-g-convex",
            GCurvature::GConvex => "g-convex",
            GCurvature::GConcave => "g-concave",
            GCurvature::Unknown => "unknown",
        };
        let e = match self.e_curvature {
            ECurvature::ELinear => "e-linear",
            ECurvature::EConvex => "e-convex",
            ECurvature::EConcave => "e-concave",
            ECurvature::Unknown => "unknown",
        };
        let dc = if self.is_dc() { "DC-with-split" } else { "unknown" };
        format!("g: {g}; e: {e}; dc: {dc}")
    }
}

/// A verdict together with the rule chain that produced it.
#[derive(Clone, Debug)]
pub struct Certified {
    pub verdict: Verdict,
    pub proof: Vec<String>,
}

struct Analysis {
    g: GCurvature,
    e: ECurvature,
    dc: Option<(CurvatureExpr, CurvatureExpr)>,
    monotone: Monotonicity,
    nonneg: bool,
    proof: Vec<String>,
}

impl Analysis {
    fn unknown(reason: impl Into<String>) -> Self {
        Analysis {
            g: GCurvature::Unknown,
            e: ECurvature::Unknown,
            dc: None,
            monotone: Monotonicity::Unknown,
            nonneg: false,
            proof: vec![reason.into()],
        }
    }
}

fn zero_expr() -> CurvatureExpr {
    CurvatureExpr::Const(0.0)
}

/// DC split from the Euclidean label: an e-convex expression splits as
/// `(self, 0)` and an e-concave one as `(0, self)`.
fn dc_from_e(e: ECurvature, expr: &CurvatureExpr) -> Option<(CurvatureExpr, CurvatureExpr)> {
    match e {
        ECurvature::EConvex | ECurvature::ELinear => Some((expr.clone(), zero_expr())),
        ECurvature::EConcave => Some((zero_expr(), expr.clone())),
        ECurvature::Unknown => None,
    }
}

fn combine_g(a: GCurvature, b: GCurvature) -> GCurvature {
    use GCurvature::*;
    match (a, b) {
        (GLinear, x) | (x, GLinear) => {
            // g-linear is both g-convex and g-concave; it never breaks the
            // other side's label
            match x {
                GLinear => GLinear,
                StrictlyGConvex => StrictlyGConvex,
                GConvex => GConvex,
                GConcave => GConcave,
                Unknown => Unknown,
            }
        }
        (StrictlyGConvex, StrictlyGConvex)
        | (StrictlyGConvex, GConvex)
        | (GConvex, StrictlyGConvex) => StrictlyGConvex,
        (GConvex, GConvex) => GConvex,
        (GConcave, GConcave) => GConcave,
        _ => Unknown,
    }
}

fn combine_e(a: ECurvature, b: ECurvature) -> ECurvature {
    use ECurvature::*;
    match (a, b) {
        (ELinear, x) | (x, ELinear) => x,
        (EConvex, EConvex) => EConvex,
        (EConcave, EConcave) => EConcave,
        _ => Unknown,
    }
}

impl CurvatureExpr {
    /// Structural validity (atom parameter ranges, map shapes) for ambient
    /// dimension `d`.
    pub fn validate(&self, d: usize) -> Result<(), GcheckError> {
        match self {
            CurvatureExpr::Const(_) | CurvatureExpr::LogDet | CurvatureExpr::Trace
            | CurvatureExpr::EntrywiseL1 => Ok(()),
            CurvatureExpr::TraceWith(s) => {
                if s.dim() != d {
                    return Err(GcheckError::InvalidExpr("tracewith dimension mismatch".into()));
                }
                let eig = eig_sym(s);
                if eig.values[d - 1] < -1e-10 * eig.values[0].abs().max(1.0) {
                    return Err(GcheckError::InvalidExpr("tracewith coefficient must be PSD".into()));
                }
                Ok(())
            }
            CurvatureExpr::SgNorm(phi) => {
                phi.validate(d).map_err(|e| GcheckError::InvalidExpr(e.to_string()))
            }
            CurvatureExpr::QuadForm { y, .. } => {
                if y.len() != d {
                    return Err(GcheckError::InvalidExpr("quadform vector dimension mismatch".into()));
                }
                if y.iter().all(|v| *v == 0.0) {
                    return Err(GcheckError::InvalidExpr("quadform vector must be nonzero".into()));
                }
                Ok(())
            }
            CurvatureExpr::LogQuadSum { hs, offset, .. } => {
                if *offset < 0.0 {
                    return Err(GcheckError::InvalidExpr("logquadsum offset must be >= 0".into()));
                }
                if hs.is_empty() {
                    return Err(GcheckError::InvalidExpr("logquadsum needs at least one vector".into()));
                }
                for h in hs {
                    if h.len() != d {
                        return Err(GcheckError::InvalidExpr("logquadsum vector dimension mismatch".into()));
                    }
                    if h.iter().all(|v| *v == 0.0) {
                        return Err(GcheckError::InvalidExpr("logquadsum vectors must be nonzero".into()));
                    }
                }
                Ok(())
            }
            CurvatureExpr::GaugeDistTo { phi, anchor, alpha } => {
                if anchor.dim() != d {
                    return Err(GcheckError::InvalidExpr("gauge anchor dimension mismatch".into()));
                }
                if *alpha < 1.0 {
                    return Err(GcheckError::InvalidExpr(format!("gauge distance power {alpha} < 1")));
                }
                phi.validate(d).map_err(|e| GcheckError::InvalidExpr(e.to_string()))
            }
            CurvatureExpr::SDivTo { anchor } => {
                if anchor.dim() != d {
                    return Err(GcheckError::InvalidExpr("sdiv anchor dimension mismatch".into()));
                }
                Ok(())
            }
            CurvatureExpr::Negate(c) => c.validate(d),
            CurvatureExpr::NonnegCombo(children) => {
                if children.is_empty() {
                    return Err(GcheckError::InvalidExpr("empty combination".into()));
                }
                for (w, c) in children {
                    if *w < 0.0 {
                        return Err(GcheckError::InvalidExpr(format!("negative combination weight {w}")));
                    }
                    c.validate(d)?;
                }
                Ok(())
            }
            CurvatureExpr::MaxOf(children) => {
                if children.is_empty() {
                    return Err(GcheckError::InvalidExpr("empty max".into()));
                }
                for c in children {
                    c.validate(d)?;
                }
                Ok(())
            }
            CurvatureExpr::ScalarCompose { func, child } => {
                func.validate()?;
                child.validate(d)
            }
            CurvatureExpr::InverseSub(c) => c.validate(d),
            CurvatureExpr::AffineSub { map, child } => {
                map.validate(d)?;
                child.validate(map.out_dim(d))
            }
        }
    }

    /// Evaluate at an SPD point.
    pub fn eval(&self, x: &SpdMatrix) -> f64 {
        match self {
            CurvatureExpr::Const(c) => *c,
            CurvatureExpr::LogDet => x.log_det(),
            CurvatureExpr::Trace => x.trace(),
            CurvatureExpr::TraceWith(s) => x.sym().dot(s),
            CurvatureExpr::SgNorm(phi) => {
                phi.eval(x.eigenvalues().as_slice()).expect("validated gauge")
            }
            CurvatureExpr::QuadForm { y, inverse } => {
                if *inverse {
                    y.dot(&x.solve_vec(y))
                } else {
                    y.dot(&(x.as_matrix() * y))
                }
            }
            CurvatureExpr::LogQuadSum { hs, inverse, offset } => {
                let total: f64 = hs
                    .iter()
                    .map(|h| {
                        if *inverse {
                            h.dot(&x.solve_vec(h))
                        } else {
                            h.dot(&(x.as_matrix() * h))
                        }
                    })
                    .sum();
                (offset + total).ln()
            }
            CurvatureExpr::GaugeDistTo { phi, anchor, alpha } => {
                gauge_dist(phi, anchor, x).expect("validated gauge").powf(*alpha)
            }
            CurvatureExpr::SDivTo { anchor } => crate::regularizers::s_div(x, anchor),
            CurvatureExpr::EntrywiseL1 => x.as_matrix().iter().map(|v| v.abs()).sum(),
            CurvatureExpr::Negate(c) => -c.eval(x),
            CurvatureExpr::NonnegCombo(children) => {
                children.iter().map(|(w, c)| w * c.eval(x)).sum()
            }
            CurvatureExpr::MaxOf(children) => children
                .iter()
                .map(|c| c.eval(x))
                .fold(f64::NEG_INFINITY, f64::max),
            CurvatureExpr::ScalarCompose { func, child } => func.apply(child.eval(x)),
            CurvatureExpr::InverseSub(c) => c.eval(&x.inverse()),
            CurvatureExpr::AffineSub { map, child } => {
                let mapped = map.apply(x.as_matrix());
                c_eval_spd(child, mapped)
            }
        }
    }
}

fn c_eval_spd(child: &CurvatureExpr, mapped: DMatrix<f64>) -> f64 {
    child.eval(&SpdMatrix::assume_spd(SymMatrix::new(mapped)))
}

/// Certify curvature labels for an expression.
///
/// Sound but incomplete: every non-unknown label is justified by the returned
/// proof trace; `unknown` never means "refuted". Deterministic.
pub fn certify(expr: &CurvatureExpr) -> Certified {
    let a = analyze(expr);
    Certified {
        verdict: Verdict { g_curvature: a.g, e_curvature: a.e, dc_split: a.dc },
        proof: a.proof,
    }
}

fn analyze(expr: &CurvatureExpr) -> Analysis {
    match expr {
        CurvatureExpr::Const(_) => Analysis {
            g: GCurvature::GLinear,
            e: ECurvature::ELinear,
            dc: Some((expr.clone(), zero_expr())),
            monotone: Monotonicity::Nondecreasing,
            nonneg: matches!(expr, CurvatureExpr::Const(c) if *c >= 0.0),
            proof: vec!["atom: constant (g-linear, e-linear)".into()],
        },
        CurvatureExpr::LogDet => Analysis {
            g: GCurvature::GLinear,
            e: ECurvature::EConcave,
            dc: Some((zero_expr(), expr.clone())),
            monotone: Monotonicity::Nondecreasing,
            nonneg: false,
            proof: vec!["atom: log det (g-linear, e-concave)".into()],
        },
        CurvatureExpr::Trace => Analysis {
            g: GCurvature::GConvex,
            e: ECurvature::ELinear,
            dc: Some((expr.clone(), zero_expr())),
            monotone: Monotonicity::Nondecreasing,
            nonneg: true,
            proof: vec!["atom: trace (g-convex, e-linear)".into()],
        },
        CurvatureExpr::TraceWith(_) => Analysis {
            g: GCurvature::GConvex,
            e: ECurvature::ELinear,
            dc: Some((expr.clone(), zero_expr())),
            monotone: Monotonicity::Nondecreasing,
            nonneg: true,
            proof: vec!["atom: tr(S X) with PSD S (g-convex, e-linear)".into()],
        },
        CurvatureExpr::SgNorm(_) => Analysis {
            g: GCurvature::GConvex,
            e: ECurvature::EConvex,
            dc: Some((expr.clone(), zero_expr())),
            monotone: Monotonicity::Nondecreasing,
            nonneg: true,
            proof: vec!["atom: unitarily invariant norm (g-convex, e-convex, isotone)".into()],
        },
        CurvatureExpr::QuadForm { inverse, .. } => {
            let e = if *inverse { ECurvature::EConvex } else { ECurvature::ELinear };
            Analysis {
                g: GCurvature::StrictlyGConvex,
                e,
                dc: Some((expr.clone(), zero_expr())),
                monotone: if *inverse { Monotonicity::Nonincreasing } else { Monotonicity::Nondecreasing },
                nonneg: true,
                proof: vec![format!(
                    "atom: quadratic form y^T X^{} y (strictly g-convex)",
                    if *inverse { "-1" } else { "+1" }
                )],
            }
        }
        CurvatureExpr::LogQuadSum { inverse, .. } => {
            let (e, dc) = if *inverse {
                (ECurvature::EConvex, Some((expr.clone(), zero_expr())))
            } else {
                (ECurvature::EConcave, Some((zero_expr(), expr.clone())))
            };
            Analysis {
                g: GCurvature::StrictlyGConvex,
                e,
                dc,
                monotone: if *inverse { Monotonicity::Nonincreasing } else { Monotonicity::Nondecreasing },
                nonneg: false,
                proof: vec![format!(
                    "atom: log(offset + sum h^T X^{} h) (strictly g-convex{})",
                    if *inverse { "-1" } else { "+1" },
                    if *inverse { ", e-convex" } else { ", e-concave" }
                )],
            }
        }
        CurvatureExpr::GaugeDistTo { alpha, .. } => Analysis {
            g: GCurvature::GConvex,
            e: ECurvature::Unknown,
            dc: None,
            monotone: Monotonicity::Unknown,
            nonneg: true,
            proof: vec![format!("atom: d_Phi(., Z)^{alpha} with alpha >= 1 (g-convex)")],
        },
        CurvatureExpr::SDivTo { anchor } => {
            // delta_S^2(X, Z) = [-log det X / 2 - log det Z / 2] + log det((X+Z)/2)
            let convex = CurvatureExpr::NonnegCombo(vec![
                (0.5, CurvatureExpr::Negate(Box::new(CurvatureExpr::LogDet))),
                (1.0, CurvatureExpr::Const(-0.5 * anchor.log_det())),
            ]);
            let concave = CurvatureExpr::AffineSub {
                map: PositiveAffineMap::Chain(vec![
                    PositiveAffineMap::Shift(anchor.sym().clone()),
                    PositiveAffineMap::Scale(0.5),
                ]),
                child: Box::new(CurvatureExpr::LogDet),
            };
            Analysis {
                g: GCurvature::GConvex,
                e: ECurvature::Unknown,
                dc: Some((convex, concave)),
                monotone: Monotonicity::Unknown,
                nonneg: true,
                proof: vec![
                    "atom: S-divergence to a fixed anchor (g-convex, DC via log-det split)".into(),
                ],
            }
        }
        CurvatureExpr::EntrywiseL1 => Analysis {
            g: GCurvature::Unknown,
            e: ECurvature::EConvex,
            dc: Some((expr.clone(), zero_expr())),
            monotone: Monotonicity::Unknown,
            nonneg: true,
            proof: vec![
                "atom: entrywise l1 (e-convex as a norm; not g-convex — no geodesic label)".into(),
            ],
        },
        CurvatureExpr::Negate(child) => {
            let mut a = analyze(child);
            a.g = match a.g {
                GCurvature::GLinear => GCurvature::GLinear,
                GCurvature::StrictlyGConvex | GCurvature::GConvex => GCurvature::GConcave,
                GCurvature::GConcave => GCurvature::GConvex,
                GCurvature::Unknown => GCurvature::Unknown,
            };
            a.e = match a.e {
                ECurvature::ELinear => ECurvature::ELinear,
                ECurvature::EConvex => ECurvature::EConcave,
                ECurvature::EConcave => ECurvature::EConvex,
                ECurvature::Unknown => ECurvature::Unknown,
            };
            a.dc = a.dc.map(|(c, k)| {
                (CurvatureExpr::Negate(Box::new(k)), CurvatureExpr::Negate(Box::new(c)))
            });
            a.monotone = a.monotone.flip();
            a.nonneg = false;
            a.proof.push("rule: negation flips curvature labels".into());
            a
        }
        CurvatureExpr::NonnegCombo(children) => {
            if children.iter().any(|(w, _)| *w < 0.0) {
                return Analysis::unknown("negative weight in combination: nothing certified");
            }
            let active: Vec<(f64, Analysis)> = children
                .iter()
                .filter(|(w, _)| *w > 0.0)
                .map(|(w, c)| (*w, analyze(c)))
                .collect();
            if active.is_empty() {
                return analyze(&zero_expr());
            }
            let mut g = GCurvature::GLinear;
            let mut e = ECurvature::ELinear;
            let mut monotone = active[0].1.monotone;
            let mut nonneg = true;
            let mut proof = vec![format!(
                "rule: nonnegative combination of {} certified parts",
                active.len()
            )];
            let mut convex_parts = Vec::new();
            let mut concave_parts = Vec::new();
            let mut all_dc = true;
            for (w, a) in &active {
                g = combine_g(g, a.g);
                e = combine_e(e, a.e);
                if a.monotone != monotone {
                    monotone = Monotonicity::Unknown;
                }
                nonneg &= a.nonneg;
                proof.extend(a.proof.iter().map(|p| format!("  {p}")));
                match &a.dc {
                    Some((c, k)) => {
                        convex_parts.push((*w, c.clone()));
                        concave_parts.push((*w, k.clone()));
                    }
                    None => all_dc = false,
                }
            }
            let dc = if all_dc {
                proof.push("rule: weighted sum of DC splits is a DC split".into());
                Some((
                    CurvatureExpr::NonnegCombo(convex_parts),
                    CurvatureExpr::NonnegCombo(concave_parts),
                ))
            } else {
                None
            };
            Analysis { g, e, dc, monotone, nonneg, proof }
        }
        CurvatureExpr::MaxOf(children) => {
            let parts: Vec<Analysis> = children.iter().map(analyze).collect();
            let g = if parts.iter().all(|a| a.g.is_convex()) {
                GCurvature::GConvex
            } else {
                GCurvature::Unknown
            };
            let e = if parts.iter().all(|a| a.e.is_convex()) {
                ECurvature::EConvex
            } else {
                ECurvature::Unknown
            };
            let monotone = if parts.iter().all(|a| a.monotone == Monotonicity::Nondecreasing) {
                Monotonicity::Nondecreasing
            } else if parts.iter().all(|a| a.monotone == Monotonicity::Nonincreasing) {
                Monotonicity::Nonincreasing
            } else {
                Monotonicity::Unknown
            };
            let nonneg = parts.iter().any(|a| a.nonneg);
            let mut proof = vec!["rule: pointwise max preserves (g-/e-)convexity".into()];
            for a in &parts {
                proof.extend(a.proof.iter().map(|p| format!("  {p}")));
            }
            // max(c_i + k_i) = max_i(c_i - sum_{j != i} (-k_j)) + sum_j k_j
            let dc = if parts.iter().all(|a| a.dc.is_some()) {
                let splits: Vec<&(CurvatureExpr, CurvatureExpr)> =
                    parts.iter().map(|a| a.dc.as_ref().unwrap()).collect();
                let mut branches = Vec::new();
                for (i, (ci, _)) in splits.iter().enumerate() {
                    let mut terms = vec![(1.0, ci.clone())];
                    for (j, (_, kj)) in splits.iter().enumerate() {
                        if i != j {
                            terms.push((1.0, CurvatureExpr::Negate(Box::new(kj.clone()))));
                        }
                    }
                    branches.push(CurvatureExpr::NonnegCombo(terms));
                }
                let concave = CurvatureExpr::NonnegCombo(
                    splits.iter().map(|(_, k)| (1.0, k.clone())).collect(),
                );
                proof.push("rule: max of DC splits rewritten as convex max plus shared concave part".into());
                Some((CurvatureExpr::MaxOf(branches), concave))
            } else {
                None
            };
            Analysis { g, e, dc, monotone, nonneg, proof }
        }
        CurvatureExpr::ScalarCompose { func, child } => {
            let a = analyze(child);
            if func.validate().is_err() {
                return Analysis::unknown("scalar function outside the admitted catalog");
            }
            if *func == ScalarFn::Identity {
                let mut out = a;
                out.proof.push("rule: identity composition".into());
                return out;
            }
            let (convex, nondecr_global, nondecr_nonneg, needs_nonneg) = func.tags();
            if needs_nonneg && !a.nonneg {
                let mut out = Analysis::unknown(
                    "power composition needs a certified-nonnegative inner function",
                );
                out.proof.extend(a.proof);
                return out;
            }
            let monotone_ok = nondecr_global || (nondecr_nonneg && a.nonneg);
            let g = if convex && monotone_ok && a.g.is_convex() {
                GCurvature::GConvex
            } else if convex && a.g == GCurvature::GLinear {
                GCurvature::GConvex
            } else {
                GCurvature::Unknown
            };
            let e = if convex && a.e == ECurvature::ELinear {
                ECurvature::EConvex
            } else if convex && monotone_ok && a.e.is_convex() {
                ECurvature::EConvex
            } else {
                ECurvature::Unknown
            };
            let monotone = if monotone_ok { a.monotone } else { Monotonicity::Unknown };
            let nonneg = match func {
                ScalarFn::Exp | ScalarFn::AbsPow(_) | ScalarFn::PowPos(_) => true,
                ScalarFn::Identity => a.nonneg,
            };
            let mut proof = a.proof;
            proof.push(format!(
                "rule: composition with {:?} (convex, nondecreasing{})",
                func,
                if nondecr_global { "" } else { " on R+" }
            ));
            let dc = dc_from_e(e, expr);
            Analysis { g, e, dc, monotone, nonneg, proof }
        }
        CurvatureExpr::InverseSub(child) => {
            // log det(X^{-1}) is exactly -log det X; rewrite so the Euclidean
            // side is not lost
            if **child == CurvatureExpr::LogDet {
                let mut a = analyze(&CurvatureExpr::Negate(Box::new(CurvatureExpr::LogDet)));
                a.proof.push("rewrite: log det of the inverse is the negated log det".into());
                return a;
            }
            let a = analyze(child);
            // inversion maps geodesics onto geodesics, preserving geodesic labels
            let g = a.g;
            // Euclidean side: X -> X^{-1} is operator convex, so a Loewner-
            // nondecreasing e-convex outer function stays e-convex
            let e = if a.e.is_convex() && a.monotone == Monotonicity::Nondecreasing {
                ECurvature::EConvex
            } else {
                ECurvature::Unknown
            };
            let mut proof = a.proof;
            proof.push("rule: inverse substitution preserves geodesic curvature".into());
            if e == ECurvature::EConvex {
                proof.push(
                    "rule: monotone e-convex composed with the operator-convex inverse stays e-convex"
                        .into(),
                );
            }
            let dc = dc_from_e(e, expr);
            Analysis { g, e, dc, monotone: a.monotone.flip(), nonneg: a.nonneg, proof }
        }
        CurvatureExpr::AffineSub { map, child } => {
            let a = analyze(child);
            let g = if a.g.is_convex() && a.monotone == Monotonicity::Nondecreasing {
                GCurvature::GConvex
            } else {
                GCurvature::Unknown
            };
            // affine substitution in the ambient space preserves Euclidean labels
            let e = a.e;
            let mut proof = a.proof;
            proof.push("rule: positive affine substitution".into());
            if g == GCurvature::GConvex {
                proof.push(
                    "rule: g-convex nondecreasing function of a positive affine map is g-convex".into(),
                );
            }
            let dc = a.dc.map(|(c, k)| {
                (
                    CurvatureExpr::AffineSub { map: map.clone(), child: Box::new(c) },
                    CurvatureExpr::AffineSub { map: map.clone(), child: Box::new(k) },
                )
            });
            Analysis { g, e, dc, monotone: a.monotone, nonneg: a.nonneg, proof }
        }
    }
}

/// Combine the verdicts of an objective and a regularizer for
/// `phi + beta R` along the four certified table rows. Both inputs must be at
/// least g-convex.
pub fn combine_table(phi: &Verdict, reg: &Verdict) -> Result<Verdict, GcheckError> {
    if !phi.g_curvature.is_convex() || !reg.g_curvature.is_convex() {
        return Err(GcheckError::NotGConvexInput);
    }
    let g = combine_g(phi.g_curvature, reg.g_curvature);
    let e = combine_e(phi.e_curvature, reg.e_curvature);
    let dc = match (&phi.dc_split, &reg.dc_split) {
        (Some((c1, k1)), Some((c2, k2))) => Some((
            CurvatureExpr::NonnegCombo(vec![(1.0, c1.clone()), (1.0, c2.clone())]),
            CurvatureExpr::NonnegCombo(vec![(1.0, k1.clone()), (1.0, k2.clone())]),
        )),
        _ => None,
    };
    Ok(Verdict { g_curvature: g, e_curvature: e, dc_split: dc })
}

/// Outcome of the randomized falsification guard.
#[derive(Debug)]
pub struct AuditReport {
    pub trials: usize,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// Randomized numeric audit of a claimed verdict at dimension `d`: geodesic
/// midpoint tests for the geodesic label, Euclidean midpoint tests for the
/// Euclidean label, and DC split checks (sum identity plus curvature of the
/// parts). Returns the first few counterexamples on failure.
pub fn numeric_audit(
    expr: &CurvatureExpr,
    verdict: &Verdict,
    trials: usize,
    d: usize,
    seed: u64,
) -> AuditReport {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let slack = |scale: f64| 1e-9 * (1.0 + scale.abs());
    for t in 0..trials {
        if failures.len() >= 5 {
            break;
        }
        let a = random_spd(d, &mut rng);
        let b = random_spd(d, &mut rng);
        let fa = expr.eval(&a);
        let fb = expr.eval(&b);
        let avg = 0.5 * (fa + fb);

        match verdict.g_curvature {
            GCurvature::GConvex | GCurvature::StrictlyGConvex => {
                let mid = expr.eval(&geometric_mean(&a, &b));
                if mid > avg + slack(avg) {
                    failures.push(format!(
                        "trial {t}: geodesic midpoint {mid} exceeds average {avg}"
                    ));
                }
            }
            GCurvature::GConcave => {
                let mid = expr.eval(&geometric_mean(&a, &b));
                if mid < avg - slack(avg) {
                    failures.push(format!(
                        "trial {t}: geodesic midpoint {mid} below average {avg} for claimed g-concavity"
                    ));
                }
            }
            GCurvature::GLinear => {
                let mid = expr.eval(&geometric_mean(&a, &b));
                if (mid - avg).abs() > slack(avg) {
                    failures.push(format!(
                        "trial {t}: geodesic midpoint {mid} != average {avg} for claimed g-linearity"
                    ));
                }
            }
            GCurvature::Unknown => {}
        }

        if verdict.e_curvature != ECurvature::Unknown {
            let emid_point = SpdMatrix::new(SymMatrix::new(
                (a.as_matrix() + b.as_matrix()) * 0.5,
            ))
            .expect("midpoint of SPD is SPD");
            let emid = expr.eval(&emid_point);
            let convex_ok = emid <= avg + slack(avg);
            let concave_ok = emid >= avg - slack(avg);
            let ok = match verdict.e_curvature {
                ECurvature::EConvex => convex_ok,
                ECurvature::EConcave => concave_ok,
                ECurvature::ELinear => convex_ok && concave_ok,
                ECurvature::Unknown => true,
            };
            if !ok {
                failures.push(format!(
                    "trial {t}: euclidean midpoint {emid} vs average {avg} contradicts {:?}",
                    verdict.e_curvature
                ));
            }
        }

        if let Some((cx, ck)) = &verdict.dc_split {
            let total = cx.eval(&a) + ck.eval(&a);
            if (total - fa).abs() > 1e-10 * (1.0 + fa.abs()) {
                failures.push(format!("trial {t}: DC split sums to {total}, expected {fa}"));
            }
            let emid_point = SpdMatrix::new(SymMatrix::new(
                (a.as_matrix() + b.as_matrix()) * 0.5,
            ))
            .expect("midpoint of SPD is SPD");
            let cmid = cx.eval(&emid_point);
            let cavg = 0.5 * (cx.eval(&a) + cx.eval(&b));
            if cmid > cavg + slack(cavg) {
                failures.push(format!("trial {t}: DC convex part fails midpoint convexity"));
            }
            let kmid = ck.eval(&emid_point);
            let kavg = 0.5 * (ck.eval(&a) + ck.eval(&b));
            if kmid < kavg - slack(kavg) {
                failures.push(format!("trial {t}: DC concave part fails midpoint concavity"));
            }
        }
    }
    AuditReport { trials, passed: failures.is_empty(), failures }
}

/// Ready-made expressions for the named regularizers and likelihood
/// objectives, used by the verification suites and the CLI.
pub mod catalog {
    use super::*;

    /// `tr X` — the low-rank-inducing trace penalty.
    pub fn trace_reg() -> CurvatureExpr {
        CurvatureExpr::Trace
    }

    /// `log det X`.
    pub fn log_det_barrier() -> CurvatureExpr {
        CurvatureExpr::LogDet
    }

    /// `| sum of k largest eigenvalues |^p` for `p >= 1`.
    pub fn ky_fan_top_k_power(k: usize, p: f64) -> CurvatureExpr {
        CurvatureExpr::ScalarCompose {
            func: ScalarFn::AbsPow(p),
            child: Box::new(CurvatureExpr::SgNorm(GaugeFunction::ky_fan(k))),
        }
    }

    /// `exp(tr X)`.
    pub fn exp_trace() -> CurvatureExpr {
        CurvatureExpr::ScalarCompose {
            func: ScalarFn::Exp,
            child: Box::new(CurvatureExpr::Trace),
        }
    }

    /// Smooth Schatten `tr (X + gamma I)^{p/2}` for `p >= 2` (for `p` below 2
    /// the function is g-convex but not Euclidean convex, and no expression in
    /// this AST certifies it).
    pub fn smooth_schatten(p: f64, gamma: f64, d: usize) -> CurvatureExpr {
        assert!(p >= 2.0, "the certified composition needs p >= 2");
        CurvatureExpr::ScalarCompose {
            func: ScalarFn::PowPos(p / 2.0),
            child: Box::new(CurvatureExpr::AffineSub {
                map: PositiveAffineMap::Shift(SymMatrix::new(
                    DMatrix::identity(d, d) * gamma,
                )),
                child: Box::new(CurvatureExpr::SgNorm(GaugeFunction::schatten(p / 2.0))),
            }),
        }
    }

    /// `beta (tr X^{-1} + log det X)` — diagonal loading.
    pub fn diagonal_loading(beta: f64) -> CurvatureExpr {
        CurvatureExpr::NonnegCombo(vec![
            (beta, CurvatureExpr::InverseSub(Box::new(CurvatureExpr::Trace))),
            (beta, CurvatureExpr::LogDet),
        ])
    }

    /// `delta_S^2(X, anchor)`.
    pub fn s_div_ball(anchor: SpdMatrix, beta: f64) -> CurvatureExpr {
        CurvatureExpr::NonnegCombo(vec![(beta, CurvatureExpr::SDivTo { anchor })])
    }

    /// Tyler's estimator `(d/n) sum_i log(x_i^T X^{-1} x_i) + log det X`.
    pub fn tyler(samples: &[DVector<f64>]) -> CurvatureExpr {
        let d = samples[0].len() as f64;
        let n = samples.len() as f64;
        let mut terms: Vec<(f64, CurvatureExpr)> = samples
            .iter()
            .map(|x| {
                (
                    d / n,
                    CurvatureExpr::LogQuadSum { hs: vec![x.clone()], inverse: true, offset: 0.0 },
                )
            })
            .collect();
        terms.push((1.0, CurvatureExpr::LogDet));
        CurvatureExpr::NonnegCombo(terms)
    }

    /// Tyler plus diagonal loading.
    pub fn tyler_diag_loading(samples: &[DVector<f64>], beta: f64) -> CurvatureExpr {
        CurvatureExpr::NonnegCombo(vec![
            (1.0, tyler(samples)),
            (1.0, diagonal_loading(beta)),
        ])
    }

    /// Gaussian negative log-likelihood `tr(S X^{-1}) + log det X`.
    pub fn gaussian(scatter: SymMatrix) -> CurvatureExpr {
        CurvatureExpr::NonnegCombo(vec![
            (1.0, CurvatureExpr::InverseSub(Box::new(CurvatureExpr::TraceWith(scatter)))),
            (1.0, CurvatureExpr::LogDet),
        ])
    }

    /// Gaussian optimistic likelihood with an S-divergence ball.
    pub fn gaussian_optimistic(scatter: SymMatrix, anchor: SpdMatrix, beta: f64) -> CurvatureExpr {
        CurvatureExpr::NonnegCombo(vec![
            (1.0, gaussian(scatter)),
            (beta, CurvatureExpr::SDivTo { anchor }),
        ])
    }

    /// Kotz negative log-likelihood. The power term enters as
    /// `exp(shape * log q_i) / b^shape`, which certifies Euclidean convexity
    /// for every positive shape through the log-quadratic atom.
    pub fn kotz(samples: &[DVector<f64>], alpha: f64, b: f64, shape: f64) -> CurvatureExpr {
        let d = samples[0].len() as f64;
        let n = samples.len() as f64;
        let mut terms: Vec<(f64, CurvatureExpr)> = vec![(0.5 * n, CurvatureExpr::LogDet)];
        for x in samples {
            let log_q =
                CurvatureExpr::LogQuadSum { hs: vec![x.clone()], inverse: true, offset: 0.0 };
            if d / 2.0 - alpha > 0.0 {
                terms.push((d / 2.0 - alpha, log_q.clone()));
            }
            terms.push((
                b.powf(-shape),
                CurvatureExpr::ScalarCompose {
                    func: ScalarFn::Exp,
                    child: Box::new(CurvatureExpr::NonnegCombo(vec![(shape, log_q)])),
                },
            ));
        }
        CurvatureExpr::NonnegCombo(terms)
    }

    /// Multivariate-t negative log-likelihood; the log terms carry the `+1`
    /// offset through the augmented quadratic atom.
    pub fn mvt(samples: &[DVector<f64>], nu: f64) -> CurvatureExpr {
        let d = samples[0].len() as f64;
        let n = samples.len() as f64;
        let mut terms: Vec<(f64, CurvatureExpr)> = vec![(0.5 * n, CurvatureExpr::LogDet)];
        for x in samples {
            terms.push((
                0.5 * (nu + d),
                CurvatureExpr::LogQuadSum {
                    hs: vec![x / nu.sqrt()],
                    inverse: true,
                    offset: 1.0,
                },
            ));
        }
        CurvatureExpr::NonnegCombo(terms)
    }

    /// Log-normal negative log-likelihood on elementwise-log data.
    pub fn lognormal(log_scatter: SymMatrix, n: usize) -> CurvatureExpr {
        CurvatureExpr::NonnegCombo(vec![(0.5 * n as f64, gaussian(log_scatter))])
    }

    /// Square-root objective `delta_S^2(X, A) + delta_S^2(X, I)`.
    pub fn sqrt_objective(a: SpdMatrix) -> CurvatureExpr {
        let d = a.dim();
        CurvatureExpr::NonnegCombo(vec![
            (1.0, CurvatureExpr::SDivTo { anchor: a }),
            (1.0, CurvatureExpr::SDivTo { anchor: SpdMatrix::identity(d) }),
        ])
    }

    /// Karcher barycenter objective `sum_i w_i delta_S^2(X, A_i)`.
    pub fn karcher(data: &[SpdMatrix], weights: Option<&[f64]>) -> CurvatureExpr {
        let m = data.len();
        let terms = data
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let w = weights.map_or(1.0 / m as f64, |ws| ws[i]);
                (w, CurvatureExpr::SDivTo { anchor: a.clone() })
            })
            .collect();
        CurvatureExpr::NonnegCombo(terms)
    }

    /// The paper's Euclidean-but-not-geodesic counterexample `sum |X_ij|`.
    pub fn entrywise_l1() -> CurvatureExpr {
        CurvatureExpr::EntrywiseL1
    }

    /// The paper's geodesic-but-not-Euclidean counterexample
    /// `sum_i log(y_i^T X y_i)`.
    pub fn sum_log_quad(samples: &[DVector<f64>]) -> CurvatureExpr {
        CurvatureExpr::NonnegCombo(
            samples
                .iter()
                .map(|y| {
                    (
                        1.0,
                        CurvatureExpr::LogQuadSum {
                            hs: vec![y.clone()],
                            inverse: false,
                            offset: 0.0,
                        },
                    )
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::random_spd;
    use rand::SeedableRng;

    fn certify_ok(e: &CurvatureExpr, d: usize) -> Certified {
        e.validate(d).expect("expression must validate");
        certify(e)
    }

    #[test]
    fn logdet_is_glinear_econcave_dc() {
        let c = certify_ok(&CurvatureExpr::LogDet, 4);
        assert_eq!(c.verdict.g_curvature, GCurvature::GLinear);
        assert_eq!(c.verdict.e_curvature, ECurvature::EConcave);
        let (cx, _) = c.verdict.dc_split.as_ref().unwrap();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(301);
        let x = random_spd(4, &mut rng);
        assert_eq!(cx.eval(&x), 0.0, "the convex part of log det is zero");
        let audit = numeric_audit(&CurvatureExpr::LogDet, &c.verdict, 200, 5, 7);
        assert!(audit.passed, "{:?}", audit.failures);
    }

    #[test]
    fn tyler_with_loading_is_gconvex_dc() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(303);
        let samples: Vec<DVector<f64>> = (0..6)
            .map(|_| DVector::from_fn(4, |_, _| rand::Rng::random::<f64>(&mut rng) - 0.5))
            .collect();
        let e = catalog::tyler_diag_loading(&samples, 0.7);
        let c = certify_ok(&e, 4);
        assert!(c.verdict.g_curvature.is_convex());
        assert!(c.verdict.is_dc(), "Tyler + diagonal loading must be DC");
        let audit = numeric_audit(&e, &c.verdict, 300, 4, 11);
        assert!(audit.passed, "{:?}", audit.failures);
    }

    #[test]
    fn counterexamples_stay_uncertified() {
        // entrywise l1: euclidean convex, no geodesic certificate
        let l1 = catalog::entrywise_l1();
        let c = certify_ok(&l1, 4);
        assert_eq!(c.verdict.g_curvature, GCurvature::Unknown);
        assert_eq!(c.verdict.e_curvature, ECurvature::EConvex);

        // sum of log quadratic forms: strictly g-convex, never e-convex
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(307);
        let ys: Vec<DVector<f64>> = (0..5)
            .map(|_| DVector::from_fn(4, |_, _| rand::Rng::random::<f64>(&mut rng) - 0.5))
            .collect();
        let g = catalog::sum_log_quad(&ys);
        let c = certify_ok(&g, 4);
        assert!(c.verdict.g_curvature.is_convex());
        assert_ne!(c.verdict.e_curvature, ECurvature::EConvex);
        assert_ne!(c.verdict.e_curvature, ECurvature::ELinear);
        let audit = numeric_audit(&g, &c.verdict, 300, 4, 13);
        assert!(audit.passed, "{:?}", audit.failures);
    }

    #[test]
    fn mislabeled_concave_expression_fails_audit() {
        let neg_trace = CurvatureExpr::Negate(Box::new(CurvatureExpr::Trace));
        let honest = certify(&neg_trace);
        assert_eq!(honest.verdict.g_curvature, GCurvature::GConcave);
        let lying = Verdict {
            g_curvature: GCurvature::GConvex,
            e_curvature: ECurvature::Unknown,
            dc_split: None,
        };
        let audit = numeric_audit(&neg_trace, &lying, 200, 4, 17);
        assert!(!audit.passed, "the audit must refute -trace claimed g-convex");
    }

    #[test]
    fn combine_table_rows() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(311);
        let anchor = random_spd(3, &mut rng);
        let karcher = certify(&catalog::karcher(
            &[random_spd(3, &mut rng), random_spd(3, &mut rng)],
            None,
        ));
        let sdiv = certify(&catalog::s_div_ball(anchor, 0.5));

        // DC + DC -> DC
        let combined = combine_table(&karcher.verdict, &sdiv.verdict).unwrap();
        assert!(combined.g_curvature.is_convex());
        assert!(combined.is_dc());

        // e-convex (quadratic-style verdict) + DC -> DC
        let econvex_only = Verdict {
            g_curvature: GCurvature::GConvex,
            e_curvature: ECurvature::EConvex,
            dc_split: Some((CurvatureExpr::Trace, zero_expr())),
        };
        let row = combine_table(&econvex_only, &sdiv.verdict).unwrap();
        assert!(row.is_dc());

        // g-convex only + g-convex only -> g-convex, dc unknown
        let g_only = Verdict {
            g_curvature: GCurvature::GConvex,
            e_curvature: ECurvature::Unknown,
            dc_split: None,
        };
        let row = combine_table(&g_only, &g_only).unwrap();
        assert!(row.g_curvature.is_convex());
        assert!(!row.is_dc());

        // non-g-convex input is rejected
        let concave = certify(&CurvatureExpr::Negate(Box::new(CurvatureExpr::Trace)));
        assert!(matches!(
            combine_table(&concave.verdict, &sdiv.verdict),
            Err(GcheckError::NotGConvexInput)
        ));
    }

    #[test]
    fn certify_is_deterministic() {
        let e = catalog::diagonal_loading(0.9);
        let a = certify(&e);
        let b = certify(&e);
        assert_eq!(a.proof, b.proof);
        assert_eq!(a.verdict.g_curvature, b.verdict.g_curvature);
    }
}
