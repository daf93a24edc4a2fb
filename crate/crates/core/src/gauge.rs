//! Symmetric gauge functions on R^d and what they induce on the SPD cone.
//!
//! A symmetric gauge function is a norm that is invariant under coordinate
//! permutations and sign flips. The catalog here is a small closed expression
//! tree — Schatten-p, Ky-Fan-k, positive scalings, sums, lp-transforms and
//! duals — rather than arbitrary user code, so every constructible function
//! can be pushed through the norm-axiom property suite.
//!
//! Via the spectrum, each gauge function induces a unitarily invariant norm
//! `||A||_Phi = Phi(lambda(A))` on the cone, and a complete metric
//! `d_Phi(A, B) = || log(A^{-1/2} B A^{-1/2}) ||_Phi`.

use crate::spd::{eig_sym, scale_columns, symmetrize_in_place, SpdMatrix, SymMatrix};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GaugeError {
    #[error("gauge domain error: {0}")]
    DomainError(String),
    #[error("gauge parse error: {0}")]
    Parse(String),
}

fn domain(msg: impl Into<String>) -> GaugeError {
    GaugeError::DomainError(msg.into())
}

/// A symmetric gauge function as a closed expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum GaugeFunction {
    /// `(sum |x_i|^p)^{1/p}`; `p = inf` is the max norm. Requires `p >= 1`.
    SchattenP(f64),
    /// Sum of the `k` largest `|x_i|`. Requires `1 <= k <= d` at evaluation.
    KyFanK(usize),
    /// `alpha * inner(x)` for `alpha > 0`.
    Scaled(f64, Box<GaugeFunction>),
    /// Sum of gauge functions (closure under addition).
    Sum(Vec<GaugeFunction>),
    /// `[inner(|x|^p)]^{1/p}` for `p >= 1` (the lp-transform).
    LpTransform(f64, Box<GaugeFunction>),
    /// The dual norm `sup { <x, y> : inner(y) <= 1 }`.
    Dual(Box<GaugeFunction>),
}

pub const SCHATTEN_INF: f64 = f64::INFINITY;

impl GaugeFunction {
    pub fn schatten(p: f64) -> Self {
        GaugeFunction::SchattenP(p)
    }

    pub fn ky_fan(k: usize) -> Self {
        GaugeFunction::KyFanK(k)
    }

    pub fn scaled(alpha: f64, inner: GaugeFunction) -> Self {
        GaugeFunction::Scaled(alpha, Box::new(inner))
    }

    pub fn sum(parts: Vec<GaugeFunction>) -> Self {
        GaugeFunction::Sum(parts)
    }

    /// Check structural validity for dimension `d`.
    pub fn validate(&self, d: usize) -> Result<(), GaugeError> {
        match self {
            GaugeFunction::SchattenP(p) => {
                if p.is_nan() || *p < 1.0 {
                    return Err(domain(format!("schatten exponent p = {p} must be >= 1")));
                }
            }
            GaugeFunction::KyFanK(k) => {
                if *k < 1 || *k > d {
                    return Err(domain(format!("ky-fan k = {k} outside [1, {d}]")));
                }
            }
            GaugeFunction::Scaled(alpha, inner) => {
                if !(*alpha > 0.0) {
                    return Err(domain(format!("scale alpha = {alpha} must be > 0")));
                }
                inner.validate(d)?;
            }
            GaugeFunction::Sum(parts) => {
                if parts.is_empty() {
                    return Err(domain("empty sum of gauge functions"));
                }
                for p in parts {
                    p.validate(d)?;
                }
            }
            GaugeFunction::LpTransform(p, inner) => {
                if p.is_nan() || *p < 1.0 {
                    return Err(domain(format!("lp-transform exponent p = {p} must be >= 1")));
                }
                inner.validate(d)?;
            }
            GaugeFunction::Dual(inner) => inner.validate(d)?,
        }
        Ok(())
    }

    /// Evaluate the norm at `x`.
    pub fn eval(&self, x: &[f64]) -> Result<f64, GaugeError> {
        self.validate(x.len())?;
        Ok(self.eval_raw(x))
    }

    fn eval_raw(&self, x: &[f64]) -> f64 {
        match self {
            GaugeFunction::SchattenP(p) => {
                if p.is_infinite() {
                    x.iter().fold(0.0, |m, v| m.max(v.abs()))
                } else if *p == 1.0 {
                    x.iter().map(|v| v.abs()).sum()
                } else if *p == 2.0 {
                    x.iter().map(|v| v * v).sum::<f64>().sqrt()
                } else {
                    // scale out the max for overflow immunity
                    let mx = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                    if mx == 0.0 {
                        return 0.0;
                    }
                    let s: f64 = x.iter().map(|v| (v.abs() / mx).powf(*p)).sum();
                    mx * s.powf(1.0 / *p)
                }
            }
            GaugeFunction::KyFanK(k) => {
                let mut abs: Vec<f64> = x.iter().map(|v| v.abs()).collect();
                abs.sort_by(|a, b| b.partial_cmp(a).unwrap());
                abs.iter().take(*k).sum()
            }
            GaugeFunction::Scaled(alpha, inner) => alpha * inner.eval_raw(x),
            GaugeFunction::Sum(parts) => parts.iter().map(|p| p.eval_raw(x)).sum(),
            GaugeFunction::LpTransform(p, inner) => {
                let powered: Vec<f64> = x.iter().map(|v| v.abs().powf(*p)).collect();
                inner.eval_raw(&powered).powf(1.0 / *p)
            }
            GaugeFunction::Dual(inner) => dual_eval(inner, x),
        }
    }

    /// A subgradient of the norm at `x` (the gradient wherever the norm is
    /// differentiable). Used to differentiate the induced matrix norms.
    pub fn subgradient(&self, x: &[f64]) -> Result<Vec<f64>, GaugeError> {
        self.validate(x.len())?;
        Ok(self.subgradient_raw(x))
    }

    fn subgradient_raw(&self, x: &[f64]) -> Vec<f64> {
        let d = x.len();
        match self {
            GaugeFunction::SchattenP(p) => {
                if p.is_infinite() {
                    let mut g = vec![0.0; d];
                    let mut best = 0usize;
                    for i in 0..d {
                        if x[i].abs() > x[best].abs() {
                            best = i;
                        }
                    }
                    if x[best] != 0.0 {
                        g[best] = x[best].signum();
                    }
                    g
                } else if *p == 1.0 {
                    x.iter().map(|v| if *v == 0.0 { 0.0 } else { v.signum() }).collect()
                } else {
                    let nrm = self.eval_raw(x);
                    if nrm == 0.0 {
                        return vec![0.0; d];
                    }
                    x.iter()
                        .map(|v| v.signum() * (v.abs() / nrm).powf(*p - 1.0))
                        .collect()
                }
            }
            GaugeFunction::KyFanK(k) => {
                let mut idx: Vec<usize> = (0..d).collect();
                idx.sort_by(|&i, &j| x[j].abs().partial_cmp(&x[i].abs()).unwrap());
                let mut g = vec![0.0; d];
                for &i in idx.iter().take(*k) {
                    if x[i] != 0.0 {
                        g[i] = x[i].signum();
                    }
                }
                g
            }
            GaugeFunction::Scaled(alpha, inner) => {
                inner.subgradient_raw(x).into_iter().map(|v| alpha * v).collect()
            }
            GaugeFunction::Sum(parts) => {
                let mut g = vec![0.0; d];
                for part in parts {
                    for (gi, pi) in g.iter_mut().zip(part.subgradient_raw(x)) {
                        *gi += pi;
                    }
                }
                g
            }
            GaugeFunction::LpTransform(p, inner) => {
                let powered: Vec<f64> = x.iter().map(|v| v.abs().powf(*p)).collect();
                let inner_val = inner.eval_raw(&powered);
                if inner_val == 0.0 {
                    return vec![0.0; d];
                }
                let inner_grad = inner.subgradient_raw(&powered);
                let scale = inner_val.powf(1.0 / *p - 1.0);
                (0..d)
                    .map(|i| scale * inner_grad[i] * x[i].abs().powf(*p - 1.0) * x[i].signum())
                    .collect()
            }
            GaugeFunction::Dual(inner) => {
                // the gradient of a support function is its maximizer
                dual_argmax(inner, x)
            }
        }
    }
}

/// The dual gauge function (closure under duality); evaluation uses closed
/// forms where they exist and a numeric supremum otherwise.
pub fn gauge_dual(phi: GaugeFunction) -> GaugeFunction {
    GaugeFunction::Dual(Box::new(phi))
}

/// The lp-transform `x -> [Phi(|x|^p)]^{1/p}` (closure under lp-transforms).
pub fn lp_transform(phi: GaugeFunction, p: f64) -> Result<GaugeFunction, GaugeError> {
    if p.is_nan() || p < 1.0 {
        return Err(domain(format!("lp-transform exponent p = {p} must be >= 1")));
    }
    Ok(GaugeFunction::LpTransform(p, Box::new(phi)))
}

/// Evaluate `phi` at `x` (operation-style entry point).
pub fn gauge_eval(phi: &GaugeFunction, x: &[f64]) -> Result<f64, GaugeError> {
    phi.eval(x)
}

fn conjugate_exponent(p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else if p == 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}

/// Evaluation of `Dual(inner)` at `x`.
fn dual_eval(inner: &GaugeFunction, x: &[f64]) -> f64 {
    match inner {
        GaugeFunction::SchattenP(p) => {
            GaugeFunction::SchattenP(conjugate_exponent(*p)).eval_raw(x)
        }
        GaugeFunction::Scaled(alpha, g) => dual_eval(g, x) / alpha,
        // biduality: norms on R^d are reflexive
        GaugeFunction::Dual(g) => g.eval_raw(x),
        _ => numeric_dual(inner, x).0,
    }
}

/// Maximizer `y*` of `<x, y>` over the unit ball of `inner`; doubles as the
/// subgradient of the dual norm.
fn dual_argmax(inner: &GaugeFunction, x: &[f64]) -> Vec<f64> {
    match inner {
        GaugeFunction::SchattenP(p) => {
            GaugeFunction::SchattenP(conjugate_exponent(*p)).subgradient_raw(x)
        }
        GaugeFunction::Scaled(alpha, g) => {
            dual_argmax(g, x).into_iter().map(|v| v / alpha).collect()
        }
        GaugeFunction::Dual(g) => g.subgradient_raw(x),
        _ => numeric_dual(inner, x).1,
    }
}

/// Numeric supremum `max { <x, y> : Phi(y) <= 1 }` and its maximizer.
///
/// Radial supergradient ascent stalls on polyhedral balls (Ky-Fan), so this
/// reduces to the sorted-nonnegative cone (valid by the rearrangement
/// inequality and the symmetry/absoluteness of gauge functions) and runs a
/// multistart Nelder-Mead on the 0-homogeneous ratio `<a, w> / Phi(w)`,
/// seeded with the prefix-indicator vectors that are the exact maximizers for
/// the polyhedral members of the catalog.
fn numeric_dual(phi: &GaugeFunction, x: &[f64]) -> (f64, Vec<f64>) {
    let d = x.len();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| x[j].abs().partial_cmp(&x[i].abs()).unwrap());
    let a: Vec<f64> = order.iter().map(|&i| x[i].abs()).collect();
    if a[0] == 0.0 {
        return (0.0, vec![0.0; d]);
    }

    let ratio = |w: &[f64]| -> f64 {
        let wc: Vec<f64> = w.iter().map(|v| v.max(0.0)).collect();
        let dot: f64 = a.iter().zip(&wc).map(|(p, q)| p * q).sum();
        if dot <= 0.0 {
            return 0.0;
        }
        let nrm = phi.eval_raw(&wc);
        if nrm <= 0.0 {
            return 0.0;
        }
        dot / nrm
    };

    let mut starts: Vec<Vec<f64>> = Vec::new();
    starts.push(a.clone());
    for k in 1..=d {
        let mut w = vec![0.0; d];
        for wi in w.iter_mut().take(k) {
            *wi = 1.0;
        }
        starts.push(w);
    }
    // a few deterministic pseudo-random starts
    let mut state = 0x9e3779b97f4a7c15u64;
    for _ in 0..6 {
        let mut w = vec![0.0; d];
        for wi in w.iter_mut() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            *wi = ((state >> 11) as f64 / (1u64 << 53) as f64).max(1e-3);
        }
        w.sort_by(|p, q| q.partial_cmp(p).unwrap());
        starts.push(w);
    }

    let mut best_val = 0.0;
    let mut best_w = vec![0.0; d];
    for start in starts {
        let (val, w) = nelder_mead_max(&ratio, &start, 400 * (d + 1), 1e-12);
        if val > best_val {
            best_val = val;
            best_w = w;
        }
    }
    // snap near-zero support to exact zeros; recovers polyhedral corners
    let top = best_w.iter().cloned().fold(0.0f64, f64::max);
    let snapped: Vec<f64> = best_w.iter().map(|&v| if v < 1e-9 * top { 0.0 } else { v }).collect();
    let snapped_val = ratio(&snapped);
    if snapped_val >= best_val {
        best_val = snapped_val;
        best_w = snapped;
    }

    // map the sorted-cone maximizer back to the original coordinates,
    // normalized onto the unit sphere of phi
    let wc: Vec<f64> = best_w.iter().map(|v| v.max(0.0)).collect();
    let nrm = phi.eval_raw(&wc);
    let mut y = vec![0.0; d];
    if nrm > 0.0 {
        for (pos, &i) in order.iter().enumerate() {
            let sign = if x[i] < 0.0 { -1.0 } else { 1.0 };
            y[i] = sign * wc[pos] / nrm;
        }
    }
    (best_val, y)
}

/// Compact Nelder-Mead maximizer over R^d (the objective clamps coordinates
/// to the nonnegative cone itself).
fn nelder_mead_max(
    f: &dyn Fn(&[f64]) -> f64,
    start: &[f64],
    max_evals: usize,
    tol: f64,
) -> (f64, Vec<f64>) {
    let d = start.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
    simplex.push(start.to_vec());
    for i in 0..d {
        let mut v = start.to_vec();
        let step = if v[i] != 0.0 { 0.25 * v[i].abs() } else { 0.25 };
        v[i] += step;
        simplex.push(v);
    }
    let mut vals: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut evals = vals.len();

    while evals < max_evals {
        let mut idx: Vec<usize> = (0..=d).collect();
        idx.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).unwrap());
        let (best, worst, second_worst) = (idx[0], idx[d], idx[d - 1]);
        if (vals[best] - vals[worst]).abs() <= tol * (1.0 + vals[best].abs()) {
            break;
        }
        let mut centroid = vec![0.0; d];
        for &i in idx.iter().take(d) {
            for (c, s) in centroid.iter_mut().zip(&simplex[i]) {
                *c += s / d as f64;
            }
        }
        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&simplex[worst])
            .map(|(c, w)| c + (c - w))
            .collect();
        let fr = f(&reflect);
        evals += 1;
        if fr > vals[best] {
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + 2.0 * (c - w))
                .collect();
            let fe = f(&expand);
            evals += 1;
            if fe > fr {
                simplex[worst] = expand;
                vals[worst] = fe;
            } else {
                simplex[worst] = reflect;
                vals[worst] = fr;
            }
        } else if fr > vals[second_worst] {
            simplex[worst] = reflect;
            vals[worst] = fr;
        } else {
            let contract: Vec<f64> = centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + 0.5 * (w - c))
                .collect();
            let fc = f(&contract);
            evals += 1;
            if fc > vals[worst] {
                simplex[worst] = contract;
                vals[worst] = fc;
            } else {
                // shrink toward the best vertex
                let best_pt = simplex[best].clone();
                for i in 0..=d {
                    if i == best {
                        continue;
                    }
                    for (s, b) in simplex[i].iter_mut().zip(&best_pt) {
                        *s = b + 0.5 * (*s - b);
                    }
                    vals[i] = f(&simplex[i]);
                    evals += 1;
                }
            }
        }
    }
    let mut best = 0;
    for i in 1..=d {
        if vals[i] > vals[best] {
            best = i;
        }
    }
    (vals[best], simplex[best].clone())
}

/// Unitarily invariant norm induced on the SPD cone: `Phi(lambda(A))`, read
/// from the cached factorization.
pub fn ui_norm(phi: &GaugeFunction, a: &SpdMatrix) -> Result<f64, GaugeError> {
    phi.eval(a.eigenvalues().as_slice())
}

/// Euclidean gradient of `X -> Phi(lambda(X))` at an SPD point, via the
/// spectral-function rule `Q diag(dPhi(lambda)) Q^T`.
pub fn ui_norm_grad(phi: &GaugeFunction, a: &SpdMatrix) -> Result<SymMatrix, GaugeError> {
    let g = phi.subgradient(a.eigenvalues().as_slice())?;
    let q = a.eigenvectors();
    let mut out = scale_columns(q, &nalgebra::DVector::from_vec(g)) * q.transpose();
    symmetrize_in_place(&mut out);
    Ok(SymMatrix::new(out))
}

/// The metric induced by `phi` on the cone:
/// `d_Phi(A, B) = || log(A^{-1/2} B A^{-1/2}) ||_Phi`.
pub fn gauge_dist(phi: &GaugeFunction, a: &SpdMatrix, b: &SpdMatrix) -> Result<f64, GaugeError> {
    phi.validate(a.dim())?;
    if a.same_as(b) {
        return Ok(0.0);
    }
    let m = a.whiten(b.sym());
    let eig = eig_sym(&m);
    let logs: Vec<f64> = eig.values.iter().map(|l| l.ln()).collect();
    Ok(phi.eval_raw(&logs))
}

/// Euclidean gradient of `X -> d_Phi(X, anchor)^alpha` for `alpha >= 1`,
/// through the spectral chain rule on the anchor-whitened argument.
pub fn gauge_dist_grad(
    phi: &GaugeFunction,
    x: &SpdMatrix,
    anchor: &SpdMatrix,
    alpha: f64,
) -> Result<SymMatrix, GaugeError> {
    if alpha < 1.0 {
        return Err(domain(format!("gauge ball exponent alpha = {alpha} must be >= 1")));
    }
    phi.validate(x.dim())?;
    // d_Phi(X, Z) = Phi(log lambda(M)), M = Z^{-1/2} X Z^{-1/2}
    let zis = anchor.inv_sqrt();
    let m = SymMatrix::new(zis.as_matrix() * x.as_matrix() * zis.as_matrix());
    let eig = eig_sym(&m);
    let logs: Vec<f64> = eig.values.iter().map(|l| l.ln()).collect();
    let dist = phi.eval_raw(&logs);
    let g = phi.subgradient_raw(&logs);
    // d/dmu of Phi(log mu) is g_i / mu_i; pull back through the congruence
    let inner_diag: Vec<f64> = g.iter().zip(eig.values.iter()).map(|(gi, mu)| gi / mu).collect();
    let core = scale_columns(&eig.vectors, &nalgebra::DVector::from_vec(inner_diag))
        * eig.vectors.transpose();
    let mut grad = zis.as_matrix() * core * zis.as_matrix();
    symmetrize_in_place(&mut grad);
    let scale = if alpha == 1.0 { 1.0 } else { alpha * dist.powf(alpha - 1.0) };
    Ok(SymMatrix::new(grad * scale))
}

/// `x` is weakly submajorized by `y`: descending prefix sums of `x` never
/// exceed those of `y`.
pub fn weakly_submajorized(x: &[f64], y: &[f64]) -> bool {
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ys.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut sx = 0.0;
    let mut sy = 0.0;
    for (a, b) in xs.iter().zip(ys.iter()) {
        sx += a;
        sy += b;
        if sx > sy + 1e-12 * (1.0 + sy.abs()) {
            return false;
        }
    }
    true
}

/// The metric-space view: a gauge function together with its induced metric.
#[derive(Clone, Debug)]
pub struct GaugeMetric {
    pub phi: GaugeFunction,
}

impl GaugeMetric {
    pub fn new(phi: GaugeFunction) -> Self {
        GaugeMetric { phi }
    }

    pub fn dist(&self, a: &SpdMatrix, b: &SpdMatrix) -> Result<f64, GaugeError> {
        gauge_dist(&self.phi, a, b)
    }
}

/// Parse the textual gauge mini-language:
/// `schatten(p)`, `kyfan(k)`, `scale(a, G)`, `sum(G, G)`, `lp(p, G)`,
/// `dual(G)`. Case-insensitive, whitespace ignored; `schatten(inf)` is the
/// max norm.
pub fn parse_gauge(s: &str) -> Result<GaugeFunction, GaugeError> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let lower = cleaned.to_lowercase();
    let mut p = Parser { input: lower.as_bytes(), pos: 0 };
    let g = p.parse_gauge()?;
    p.expect_end()?;
    Ok(g)
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), GaugeError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(GaugeError::Parse(format!(
                "expected '{}' at position {}",
                c as char, self.pos
            )))
        }
    }

    fn expect_end(&self) -> Result<(), GaugeError> {
        if self.pos == self.input.len() {
            Ok(())
        } else {
            Err(GaugeError::Parse(format!("trailing input at position {}", self.pos)))
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphabetic() {
                self.pos += 1;
            } else {
                break;
            }
        }
        String::from_utf8_lossy(&self.input[start..self.pos]).into_owned()
    }

    fn number(&mut self) -> Result<f64, GaugeError> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() || c == b'.' || c == b'-' || c == b'+' || c == b'e' {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map_err(|e| GaugeError::Parse(format!("bad number {text:?}: {e}")))
    }

    fn parse_gauge(&mut self) -> Result<GaugeFunction, GaugeError> {
        let name = self.ident();
        match name.as_str() {
            "schatten" => {
                self.expect(b'(')?;
                let p = if self.peek() == Some(b'i') {
                    let word = self.ident();
                    if word == "inf" || word == "infinity" {
                        f64::INFINITY
                    } else {
                        return Err(GaugeError::Parse(format!("bad exponent {word:?}")));
                    }
                } else {
                    self.number()?
                };
                self.expect(b')')?;
                Ok(GaugeFunction::SchattenP(p))
            }
            "kyfan" => {
                self.expect(b'(')?;
                let k = self.number()?;
                self.expect(b')')?;
                if k.fract() != 0.0 || k < 1.0 {
                    return Err(GaugeError::Parse(format!(
                        "kyfan index must be a positive integer, got {k}"
                    )));
                }
                Ok(GaugeFunction::KyFanK(k as usize))
            }
            "scale" => {
                self.expect(b'(')?;
                let alpha = self.number()?;
                self.expect(b',')?;
                let inner = self.parse_gauge()?;
                self.expect(b')')?;
                Ok(GaugeFunction::Scaled(alpha, Box::new(inner)))
            }
            "sum" => {
                self.expect(b'(')?;
                let mut parts = vec![self.parse_gauge()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    parts.push(self.parse_gauge()?);
                }
                self.expect(b')')?;
                Ok(GaugeFunction::Sum(parts))
            }
            "lp" => {
                self.expect(b'(')?;
                let p = self.number()?;
                self.expect(b',')?;
                let inner = self.parse_gauge()?;
                self.expect(b')')?;
                Ok(GaugeFunction::LpTransform(p, Box::new(inner)))
            }
            "dual" => {
                self.expect(b'(')?;
                let inner = self.parse_gauge()?;
                self.expect(b')')?;
                Ok(GaugeFunction::Dual(Box::new(inner)))
            }
            other => Err(GaugeError::Parse(format!("unknown gauge kind {other:?}"))),
        }
    }
}
