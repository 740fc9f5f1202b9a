use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Dual number for forward-mode differentiation: value and one directional
/// derivative.
#[derive(Copy, Clone, Debug)]
pub struct Dual {
    pub v: f64,
    pub d: f64,
}

impl Dual {
    pub fn constant(v: f64) -> Self {
        Dual { v, d: 0.0 }
    }
}

/// Expression tree over coordinates, named parameters and the primitives
/// needed by the catalog tables. Cotangents like `cot` and `1/sin` are
/// composed from `sin`, `cos` and division.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// Exact rational constant.
    Const(i64, i64),
    /// Coordinate by index into the chart (x, y, z, ...).
    Coord(usize),
    /// Named parameter bound at evaluation time.
    Param(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Exp(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    /// Power with a constant rational exponent.
    Pow(Box<Expr>, i64, i64),
}

/// Coordinate names accepted by the chart encoding, in index order.
pub const COORD_NAMES: [&str; 3] = ["x", "y", "z"];

const SINGULAR_EPS: f64 = 1e-12;

impl Expr {
    /// Evaluate with dual numbers: `point` gives coordinate values, `dir`
    /// the tangent direction seeding the derivative, `params` the bound
    /// parameter values.
    pub fn eval_dual(
        &self,
        point: &[f64],
        dir: &[f64],
        params: &BTreeMap<String, f64>,
    ) -> Result<Dual> {
        Ok(match self {
            Expr::Const(n, d) => Dual::constant(*n as f64 / *d as f64),
            Expr::Coord(i) => Dual {
                v: point[*i],
                d: dir[*i],
            },
            Expr::Param(name) => {
                let v = params.get(name).copied().ok_or_else(|| {
                    Error::Inconsistent(format!("parameter `{name}` not bound"))
                })?;
                Dual::constant(v)
            }
            Expr::Add(a, b) => {
                let (a, b) = (a.eval_dual(point, dir, params)?, b.eval_dual(point, dir, params)?);
                Dual {
                    v: a.v + b.v,
                    d: a.d + b.d,
                }
            }
            Expr::Sub(a, b) => {
                let (a, b) = (a.eval_dual(point, dir, params)?, b.eval_dual(point, dir, params)?);
                Dual {
                    v: a.v - b.v,
                    d: a.d - b.d,
                }
            }
            Expr::Mul(a, b) => {
                let (a, b) = (a.eval_dual(point, dir, params)?, b.eval_dual(point, dir, params)?);
                Dual {
                    v: a.v * b.v,
                    d: a.v * b.d + a.d * b.v,
                }
            }
            Expr::Div(a, b) => {
                let (a, b) = (a.eval_dual(point, dir, params)?, b.eval_dual(point, dir, params)?);
                if b.v.abs() < SINGULAR_EPS {
                    return Err(Error::SingularLocus("division by ~0 in chart".into()));
                }
                Dual {
                    v: a.v / b.v,
                    d: (a.d * b.v - a.v * b.d) / (b.v * b.v),
                }
            }
            Expr::Neg(a) => {
                let a = a.eval_dual(point, dir, params)?;
                Dual { v: -a.v, d: -a.d }
            }
            Expr::Exp(a) => {
                let a = a.eval_dual(point, dir, params)?;
                let e = a.v.exp();
                Dual { v: e, d: a.d * e }
            }
            Expr::Sin(a) => {
                let a = a.eval_dual(point, dir, params)?;
                Dual {
                    v: a.v.sin(),
                    d: a.d * a.v.cos(),
                }
            }
            Expr::Cos(a) => {
                let a = a.eval_dual(point, dir, params)?;
                Dual {
                    v: a.v.cos(),
                    d: -a.d * a.v.sin(),
                }
            }
            Expr::Pow(a, n, m) => {
                let a = a.eval_dual(point, dir, params)?;
                let e = *n as f64 / *m as f64;
                if a.v <= 0.0 && e.fract() != 0.0 {
                    return Err(Error::SingularLocus(
                        "fractional power of a non-positive base".into(),
                    ));
                }
                let v = a.v.powf(e);
                Dual {
                    v,
                    d: e * a.v.powf(e - 1.0) * a.d,
                }
            }
        })
    }

    pub fn eval(&self, point: &[f64], params: &BTreeMap<String, f64>) -> Result<f64> {
        let zero = vec![0.0; point.len()];
        Ok(self.eval_dual(point, &zero, params)?.v)
    }

    /// Render as an s-expression.
    pub fn to_sexpr(&self) -> String {
        match self {
            Expr::Const(n, d) => {
                if *d == 1 {
                    format!("{n}")
                } else {
                    format!("{n}/{d}")
                }
            }
            Expr::Coord(i) => COORD_NAMES[*i].to_string(),
            Expr::Param(p) => p.clone(),
            Expr::Add(a, b) => format!("(+ {} {})", a.to_sexpr(), b.to_sexpr()),
            Expr::Sub(a, b) => format!("(- {} {})", a.to_sexpr(), b.to_sexpr()),
            Expr::Mul(a, b) => format!("(* {} {})", a.to_sexpr(), b.to_sexpr()),
            Expr::Div(a, b) => format!("(/ {} {})", a.to_sexpr(), b.to_sexpr()),
            Expr::Neg(a) => format!("(- {})", a.to_sexpr()),
            Expr::Exp(a) => format!("(exp {})", a.to_sexpr()),
            Expr::Sin(a) => format!("(sin {})", a.to_sexpr()),
            Expr::Cos(a) => format!("(cos {})", a.to_sexpr()),
            Expr::Pow(a, n, m) => {
                if *m == 1 {
                    format!("(pow {} {})", a.to_sexpr(), n)
                } else {
                    format!("(pow {} {}/{})", a.to_sexpr(), n, m)
                }
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sexpr())
    }
}

/// Parse the s-expression encoding of an [`Expr`].
///
/// Atoms are rational constants (`3`, `-1/2`), coordinate names (`x y z`)
/// or parameter names; lists apply `+ - * / exp sin cos pow`, with `+` and
/// `*` accepting two or more arguments and `-` doubling as unary negation.
pub fn parse_sexpr(input: &str) -> Result<Expr> {
    let tokens = tokenize(input)?;
    let mut pos = 0;
    let expr = parse_tokens(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(Error::InvalidParameter(format!(
            "trailing tokens in expression `{input}`"
        )));
    }
    Ok(expr)
}

fn tokenize(input: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in input.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    if out.is_empty() {
        return Err(Error::InvalidParameter("empty expression".into()));
    }
    Ok(out)
}

fn parse_tokens(tokens: &[String], pos: &mut usize) -> Result<Expr> {
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| Error::InvalidParameter("unexpected end of expression".into()))?;
    if tok == "(" {
        *pos += 1;
        let op = tokens
            .get(*pos)
            .ok_or_else(|| Error::InvalidParameter("missing operator".into()))?
            .clone();
        *pos += 1;
        let mut args = Vec::new();
        while tokens.get(*pos).map(String::as_str) != Some(")") {
            args.push(parse_tokens(tokens, pos)?);
            if *pos >= tokens.len() {
                return Err(Error::InvalidParameter("unbalanced parentheses".into()));
            }
        }
        *pos += 1; // consume ')'
        build(&op, args)
    } else {
        *pos += 1;
        parse_atom(tok)
    }
}

fn build(op: &str, mut args: Vec<Expr>) -> Result<Expr> {
    let argc = args.len();
    let fold = |args: Vec<Expr>, f: fn(Box<Expr>, Box<Expr>) -> Expr| {
        let mut it = args.into_iter();
        let first = it.next().unwrap();
        it.fold(first, |acc, e| f(Box::new(acc), Box::new(e)))
    };
    match op {
        "+" if argc >= 2 => Ok(fold(args, Expr::Add)),
        "*" if argc >= 2 => Ok(fold(args, Expr::Mul)),
        "-" if argc == 1 => Ok(Expr::Neg(Box::new(args.remove(0)))),
        "-" if argc == 2 => {
            let b = args.pop().unwrap();
            let a = args.pop().unwrap();
            Ok(Expr::Sub(Box::new(a), Box::new(b)))
        }
        "/" if argc == 2 => {
            let b = args.pop().unwrap();
            let a = args.pop().unwrap();
            Ok(Expr::Div(Box::new(a), Box::new(b)))
        }
        "exp" if argc == 1 => Ok(Expr::Exp(Box::new(args.remove(0)))),
        "sin" if argc == 1 => Ok(Expr::Sin(Box::new(args.remove(0)))),
        "cos" if argc == 1 => Ok(Expr::Cos(Box::new(args.remove(0)))),
        "pow" if argc == 2 => {
            let e = args.pop().unwrap();
            let a = args.pop().unwrap();
            match e {
                Expr::Const(n, m) => Ok(Expr::Pow(Box::new(a), n, m)),
                Expr::Neg(inner) => match *inner {
                    Expr::Const(n, m) => Ok(Expr::Pow(Box::new(a), -n, m)),
                    _ => Err(Error::InvalidParameter(
                        "pow exponent must be a rational constant".into(),
                    )),
                },
                _ => Err(Error::InvalidParameter(
                    "pow exponent must be a rational constant".into(),
                )),
            }
        }
        _ => Err(Error::InvalidParameter(format!(
            "bad operator `{op}` with {argc} argument(s)"
        ))),
    }
}

fn parse_atom(tok: &str) -> Result<Expr> {
    if let Some(i) = COORD_NAMES.iter().position(|c| *c == tok) {
        return Ok(Expr::Coord(i));
    }
    let numericish = tok
        .chars()
        .next()
        .map(|c| c.is_ascii_digit() || c == '-' || c == '+')
        .unwrap_or(false);
    if numericish && tok.len() > (tok.starts_with(['-', '+']) as usize) {
        let (n, d) = match tok.split_once('/') {
            Some((a, b)) => (a, b),
            None => (tok, "1"),
        };
        let n: i64 = n
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad number `{tok}`")))?;
        let d: i64 = d
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad number `{tok}`")))?;
        if d == 0 {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        return Ok(Expr::Const(n, d));
    }
    if tok.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Ok(Expr::Param(tok.to_string()));
    }
    Err(Error::InvalidParameter(format!("bad atom `{tok}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        parse_sexpr(s).unwrap()
    }

    #[test]
    fn parse_and_eval() {
        let params = BTreeMap::from([("h11".to_string(), 4.0)]);
        let e = p("(+ (* 2 x) (/ h11 2))");
        assert_eq!(e.eval(&[3.0, 0.0, 0.0], &params).unwrap(), 8.0);
    }

    #[test]
    fn roundtrip() {
        for s in [
            "(+ x (* 2 y))",
            "(- (* (/ (cos x) (sin x)) (sin y)))",
            "(pow (- (* h11 h22) (* h12 h12)) 1/2)",
            "(exp (- x))",
            "-3/2",
        ] {
            let e = p(s);
            let back = parse_sexpr(&e.to_sexpr()).unwrap();
            assert_eq!(e, back, "{s}");
        }
    }

    #[test]
    fn dual_derivatives_match_central_differences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let params = BTreeMap::from([("q".to_string(), 0.7)]);
        let exprs = [
            p("(* (exp (* q x)) (sin y))"),
            p("(/ (cos x) (sin x))"),
            p("(pow (+ (* x x) 1) 3/2)"),
            p("(- (* x y) (/ z (+ 2 (cos y))))"),
        ];
        for e in &exprs {
            for _ in 0..25 {
                let pt: Vec<f64> = (0..3).map(|_| rng.gen_range(0.3..1.2)).collect();
                let dir: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let dual = e.eval_dual(&pt, &dir, &params).unwrap();
                let h = 1e-6;
                let shifted = |s: f64| -> f64 {
                    let q: Vec<f64> = pt.iter().zip(&dir).map(|(p, d)| p + s * d).collect();
                    e.eval(&q, &params).unwrap()
                };
                let fd = (shifted(h) - shifted(-h)) / (2.0 * h);
                let scale = dual.d.abs().max(1.0);
                assert!(
                    (dual.d - fd).abs() / scale < 1e-6,
                    "{}: dual {} vs fd {}",
                    e.to_sexpr(),
                    dual.d,
                    fd
                );
            }
        }
    }

    #[test]
    fn singular_locus_is_an_error() {
        let params = BTreeMap::new();
        let e = p("(/ 1 (sin x))");
        assert!(matches!(
            e.eval(&[0.0, 0.0, 0.0], &params),
            Err(Error::SingularLocus(_))
        ));
    }
}
