//! S-expression front end for [`CurvatureExpr`], backing the
//! `gcheck certify FILE.expr` CLI.
//!
//! Grammar sketch (case-insensitive heads):
//!
//! ```text
//! EXPR := (const NUM) | (logdet) | (trace) | (tracewith MAT)
//!       | (sgnorm "GAUGE") | (quadform VEC) | (quadforminv VEC)
//!       | (logquadsum NUM VEC...) | (logquadsuminv NUM VEC...)
//!       | (gaugedist "GAUGE" NUM MAT) | (sdiv MAT) | (entrywisel1)
//!       | (neg EXPR) | (combo (NUM EXPR)...) | (max EXPR...)
//!       | (compose FUNC EXPR) | (invsub EXPR) | (affinesub MAP EXPR)
//! FUNC := exp | identity | (abspow NUM) | (powpos NUM)
//! MAP  := (hadamard MAT) | (congruence NUM NUM NUM...) | (scale NUM)
//!       | (shift MAT) | (chain MAP...)
//! MAT  := (eye NUM) | (scaledeye NUM NUM) | (diag NUM...) | (mat NUM NUM...)
//! VEC  := (vec NUM...)
//! ```
//!
//! `"GAUGE"` strings use the gauge mini-language (`schatten(2)`, ...). The
//! first argument of `logquadsum`/`logquadsuminv` is the additive offset.

use super::{CurvatureExpr, GcheckError, PositiveAffineMap, ScalarFn};
use crate::gauge::parse_gauge;
use crate::spd::{SpdMatrix, SymMatrix};
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Word(String),
    Str(String),
    Num(f64),
}

fn tokenize(input: &str) -> Result<Vec<Token>, GcheckError> {
    let mut out = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '(' => {
                out.push(Token::Open);
                chars.next();
            }
            ')' => {
                out.push(Token::Close);
                chars.next();
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(ch) => s.push(ch),
                        None => return Err(GcheckError::Parse("unterminated string".into())),
                    }
                }
                out.push(Token::Str(s));
            }
            ';' => {
                // comment to end of line
                for ch in chars.by_ref() {
                    if ch == '\n' {
                        break;
                    }
                }
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut w = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_whitespace() || ch == '(' || ch == ')' || ch == '"' {
                        break;
                    }
                    w.push(ch);
                    chars.next();
                }
                if let Ok(n) = w.parse::<f64>() {
                    out.push(Token::Num(n));
                } else {
                    out.push(Token::Word(w.to_lowercase()));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum SExpr {
    List(Vec<SExpr>),
    Word(String),
    Str(String),
    Num(f64),
}

fn build(tokens: &[Token], pos: &mut usize) -> Result<SExpr, GcheckError> {
    match tokens.get(*pos) {
        Some(Token::Open) => {
            *pos += 1;
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    Some(Token::Close) => {
                        *pos += 1;
                        return Ok(SExpr::List(items));
                    }
                    Some(_) => items.push(build(tokens, pos)?),
                    None => return Err(GcheckError::Parse("unbalanced parentheses".into())),
                }
            }
        }
        Some(Token::Close) => Err(GcheckError::Parse("unexpected ')'".into())),
        Some(Token::Word(w)) => {
            *pos += 1;
            Ok(SExpr::Word(w.clone()))
        }
        Some(Token::Str(s)) => {
            *pos += 1;
            Ok(SExpr::Str(s.clone()))
        }
        Some(Token::Num(n)) => {
            *pos += 1;
            Ok(SExpr::Num(*n))
        }
        None => Err(GcheckError::Parse("empty input".into())),
    }
}

fn err(msg: impl Into<String>) -> GcheckError {
    GcheckError::Parse(msg.into())
}

fn as_num(s: &SExpr) -> Result<f64, GcheckError> {
    match s {
        SExpr::Num(n) => Ok(*n),
        other => Err(err(format!("expected a number, got {other:?}"))),
    }
}

fn as_usize(s: &SExpr) -> Result<usize, GcheckError> {
    let n = as_num(s)?;
    if n < 0.0 || n.fract() != 0.0 {
        return Err(err(format!("expected a nonnegative integer, got {n}")));
    }
    Ok(n as usize)
}

fn head<'a>(items: &'a [SExpr], what: &str) -> Result<(&'a str, &'a [SExpr]), GcheckError> {
    match items.first() {
        Some(SExpr::Word(w)) => Ok((w.as_str(), &items[1..])),
        _ => Err(err(format!("expected a ({what} ...) form"))),
    }
}

fn parse_matrix(s: &SExpr) -> Result<DMatrix<f64>, GcheckError> {
    let SExpr::List(items) = s else {
        return Err(err("expected a matrix form"));
    };
    let (h, args) = head(items, "matrix")?;
    match h {
        "eye" => {
            let d = as_usize(args.first().ok_or_else(|| err("eye needs a dimension"))?)?;
            Ok(DMatrix::identity(d, d))
        }
        "scaledeye" => {
            if args.len() != 2 {
                return Err(err("scaledeye needs (scaledeye d c)"));
            }
            let d = as_usize(&args[0])?;
            let c = as_num(&args[1])?;
            Ok(DMatrix::identity(d, d) * c)
        }
        "diag" => {
            let vals: Result<Vec<f64>, _> = args.iter().map(as_num).collect();
            let vals = vals?;
            if vals.is_empty() {
                return Err(err("diag needs at least one entry"));
            }
            Ok(DMatrix::from_diagonal(&DVector::from_vec(vals)))
        }
        "mat" => {
            let d = as_usize(args.first().ok_or_else(|| err("mat needs a dimension"))?)?;
            let vals: Result<Vec<f64>, _> = args[1..].iter().map(as_num).collect();
            let vals = vals?;
            if vals.len() != d * d {
                return Err(err(format!("mat {d} needs {} entries, got {}", d * d, vals.len())));
            }
            Ok(DMatrix::from_row_slice(d, d, &vals))
        }
        other => Err(err(format!("unknown matrix form {other:?}"))),
    }
}

fn parse_spd(s: &SExpr) -> Result<SpdMatrix, GcheckError> {
    SpdMatrix::new(SymMatrix::new(parse_matrix(s)?))
        .map_err(|e| err(format!("anchor must be SPD: {e}")))
}

fn parse_vector(s: &SExpr) -> Result<DVector<f64>, GcheckError> {
    let SExpr::List(items) = s else {
        return Err(err("expected a (vec ...) form"));
    };
    let (h, args) = head(items, "vec")?;
    if h != "vec" {
        return Err(err(format!("expected (vec ...), got ({h} ...)")));
    }
    let vals: Result<Vec<f64>, _> = args.iter().map(as_num).collect();
    Ok(DVector::from_vec(vals?))
}

fn parse_func(s: &SExpr) -> Result<ScalarFn, GcheckError> {
    match s {
        SExpr::Word(w) if w == "exp" => Ok(ScalarFn::Exp),
        SExpr::Word(w) if w == "identity" => Ok(ScalarFn::Identity),
        SExpr::List(items) => {
            let (h, args) = head(items, "scalar function")?;
            let p = as_num(args.first().ok_or_else(|| err("scalar function needs an exponent"))?)?;
            match h {
                "abspow" => Ok(ScalarFn::AbsPow(p)),
                "powpos" => Ok(ScalarFn::PowPos(p)),
                other => Err(err(format!("unknown scalar function {other:?}"))),
            }
        }
        other => Err(err(format!("unknown scalar function {other:?}"))),
    }
}

fn parse_map(s: &SExpr) -> Result<PositiveAffineMap, GcheckError> {
    let SExpr::List(items) = s else {
        return Err(err("expected a map form"));
    };
    let (h, args) = head(items, "map")?;
    match h {
        "hadamard" => Ok(PositiveAffineMap::Hadamard(SymMatrix::new(parse_matrix(
            args.first().ok_or_else(|| err("hadamard needs a matrix"))?,
        )?))),
        "congruence" => {
            if args.len() < 2 {
                return Err(err("congruence needs (congruence rows cols entries...)"));
            }
            let rows = as_usize(&args[0])?;
            let cols = as_usize(&args[1])?;
            let vals: Result<Vec<f64>, _> = args[2..].iter().map(as_num).collect();
            let vals = vals?;
            if vals.len() != rows * cols {
                return Err(err("congruence entry count mismatch"));
            }
            Ok(PositiveAffineMap::Congruence(DMatrix::from_row_slice(rows, cols, &vals)))
        }
        "scale" => Ok(PositiveAffineMap::Scale(as_num(
            args.first().ok_or_else(|| err("scale needs a factor"))?,
        )?)),
        "shift" => Ok(PositiveAffineMap::Shift(SymMatrix::new(parse_matrix(
            args.first().ok_or_else(|| err("shift needs a matrix"))?,
        )?))),
        "chain" => {
            let maps: Result<Vec<PositiveAffineMap>, _> = args.iter().map(parse_map).collect();
            Ok(PositiveAffineMap::Chain(maps?))
        }
        other => Err(err(format!("unknown map form {other:?}"))),
    }
}

fn parse_sexpr(s: &SExpr) -> Result<CurvatureExpr, GcheckError> {
    let SExpr::List(items) = s else {
        return Err(err("expected a parenthesized expression"));
    };
    let (h, args) = head(items, "expression")?;
    match h {
        "const" => Ok(CurvatureExpr::Const(as_num(
            args.first().ok_or_else(|| err("const needs a value"))?,
        )?)),
        "logdet" => Ok(CurvatureExpr::LogDet),
        "trace" => Ok(CurvatureExpr::Trace),
        "entrywisel1" => Ok(CurvatureExpr::EntrywiseL1),
        "tracewith" => Ok(CurvatureExpr::TraceWith(SymMatrix::new(parse_matrix(
            args.first().ok_or_else(|| err("tracewith needs a matrix"))?,
        )?))),
        "sgnorm" => match args.first() {
            Some(SExpr::Str(g)) => Ok(CurvatureExpr::SgNorm(
                parse_gauge(g).map_err(|e| err(e.to_string()))?,
            )),
            _ => Err(err("sgnorm needs a quoted gauge string")),
        },
        "quadform" | "quadforminv" => {
            let y = parse_vector(args.first().ok_or_else(|| err("quadform needs a vector"))?)?;
            Ok(CurvatureExpr::QuadForm { y, inverse: h == "quadforminv" })
        }
        "logquadsum" | "logquadsuminv" => {
            let offset = as_num(args.first().ok_or_else(|| err("logquadsum needs an offset"))?)?;
            let hs: Result<Vec<DVector<f64>>, _> = args[1..].iter().map(parse_vector).collect();
            Ok(CurvatureExpr::LogQuadSum { hs: hs?, inverse: h == "logquadsuminv", offset })
        }
        "gaugedist" => {
            if args.len() != 3 {
                return Err(err("gaugedist needs (gaugedist \"GAUGE\" alpha MAT)"));
            }
            let SExpr::Str(g) = &args[0] else {
                return Err(err("gaugedist needs a quoted gauge string"));
            };
            Ok(CurvatureExpr::GaugeDistTo {
                phi: parse_gauge(g).map_err(|e| err(e.to_string()))?,
                alpha: as_num(&args[1])?,
                anchor: parse_spd(&args[2])?,
            })
        }
        "sdiv" => Ok(CurvatureExpr::SDivTo {
            anchor: parse_spd(args.first().ok_or_else(|| err("sdiv needs an anchor"))?)?,
        }),
        "neg" => Ok(CurvatureExpr::Negate(Box::new(parse_sexpr(
            args.first().ok_or_else(|| err("neg needs an expression"))?,
        )?))),
        "combo" => {
            let mut children = Vec::new();
            for item in args {
                let SExpr::List(pair) = item else {
                    return Err(err("combo items must be (weight expr) pairs"));
                };
                if pair.len() != 2 {
                    return Err(err("combo items must be (weight expr) pairs"));
                }
                children.push((as_num(&pair[0])?, parse_sexpr(&pair[1])?));
            }
            Ok(CurvatureExpr::NonnegCombo(children))
        }
        "max" => {
            let children: Result<Vec<CurvatureExpr>, _> = args.iter().map(parse_sexpr).collect();
            Ok(CurvatureExpr::MaxOf(children?))
        }
        "compose" => {
            if args.len() != 2 {
                return Err(err("compose needs (compose FUNC EXPR)"));
            }
            Ok(CurvatureExpr::ScalarCompose {
                func: parse_func(&args[0])?,
                child: Box::new(parse_sexpr(&args[1])?),
            })
        }
        "invsub" => Ok(CurvatureExpr::InverseSub(Box::new(parse_sexpr(
            args.first().ok_or_else(|| err("invsub needs an expression"))?,
        )?))),
        "affinesub" => {
            if args.len() != 2 {
                return Err(err("affinesub needs (affinesub MAP EXPR)"));
            }
            Ok(CurvatureExpr::AffineSub {
                map: parse_map(&args[0])?,
                child: Box::new(parse_sexpr(&args[1])?),
            })
        }
        other => Err(err(format!("unknown expression head {other:?}"))),
    }
}

/// Parse the textual form of a curvature expression.
pub fn parse_expr(input: &str) -> Result<CurvatureExpr, GcheckError> {
    let tokens = tokenize(input)?;
    let mut pos = 0;
    let sexpr = build(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(err("trailing input after expression"));
    }
    parse_sexpr(&sexpr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcheck::{certify, GCurvature};

    #[test]
    fn parses_atoms_and_combinations() {
        let e = parse_expr("(combo (1.0 (logdet)) (0.5 (invsub (trace))))").unwrap();
        e.validate(3).unwrap();
        let c = certify(&e);
        assert!(c.verdict.g_curvature.is_convex());
        assert!(c.verdict.is_dc());
    }

    #[test]
    fn parses_gauge_strings_and_maps() {
        let e = parse_expr(
            "(compose (abspow 2) (sgnorm \"kyfan(2)\"))",
        )
        .unwrap();
        e.validate(3).unwrap();
        assert!(certify(&e).verdict.g_curvature.is_convex());

        // log det of a positive affine image: g-convex by the affine rule,
        // e-concave by affine precomposition — exactly the S-divergence's
        // concave half
        let e = parse_expr("(affinesub (chain (shift (eye 3)) (scale 0.5)) (logdet))").unwrap();
        e.validate(3).unwrap();
        let c = certify(&e);
        assert_eq!(c.verdict.g_curvature, GCurvature::GConvex);
        assert_eq!(c.verdict.e_curvature, crate::gcheck::ECurvature::EConcave);

        let e = parse_expr("(sdiv (diag 1 2 3))").unwrap();
        e.validate(3).unwrap();
    }

    #[test]
    fn comments_and_errors() {
        let e = parse_expr("; the trace penalty\n(trace)").unwrap();
        assert_eq!(e, CurvatureExpr::Trace);

        assert!(parse_expr("(trace) (trace)").is_err());
        assert!(parse_expr("(frobnicate)").is_err());
        assert!(parse_expr("(combo (1.0 (trace)").is_err());
        assert!(parse_expr("(sdiv (diag 1 -2))").is_err());
    }

    #[test]
    fn quadform_examples() {
        let e = parse_expr("(quadforminv (vec 1 0 2))").unwrap();
        e.validate(3).unwrap();
        let c = certify(&e);
        assert_eq!(c.verdict.g_curvature, GCurvature::StrictlyGConvex);

        let e = parse_expr("(logquadsuminv 1.0 (vec 1 1))").unwrap();
        e.validate(2).unwrap();
        assert_eq!(certify(&e).verdict.g_curvature, GCurvature::StrictlyGConvex);
    }
}
