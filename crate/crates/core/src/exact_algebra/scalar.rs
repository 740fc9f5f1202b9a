use super::poly::Poly;
use super::vars::{var, VarId};
use crate::{Error, Result};
use num::{BigInt, One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub use super::poly::Rational;

/// Exact scalar: either a rational number or a reduced rational function in
/// named parameters.
///
/// Invariants maintained by every constructor and operation:
/// the denominator is nonzero, numerator and denominator share no
/// nonconstant factor, the denominator is monic under the fixed graded-lex
/// order, and a rational function whose numerator and denominator are both
/// constant collapses to the `Rat` variant. Equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scalar {
    Rat(Rational),
    Fn { num: Poly, den: Poly },
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(Rational::from(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Rat(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn rat(r: Rational) -> Self {
        Scalar::Rat(r)
    }

    /// The named parameter `name` as a scalar.
    pub fn symbol(name: &str) -> Self {
        Scalar::from_poly(Poly::var(var(name)))
    }

    pub fn from_var(v: VarId) -> Self {
        Scalar::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar::normalize(p, Poly::one())
    }

    /// Build `num/den`, normalizing to the canonical form.
    pub fn fraction(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Scalar::Rat(Rational::zero());
        }
        if let (Some(n), Some(d)) = (num.as_constant(), den.as_constant()) {
            return Scalar::Rat(n / d);
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        // Monic denominator fixes the representative.
        let lc = den.leading().expect("nonzero denominator").1.clone();
        let num = num.scale(&(Rational::one() / &lc));
        let den = den.scale(&(Rational::one() / &lc));
        if let (Some(n), Some(d)) = (num.as_constant(), den.as_constant()) {
            return Scalar::Rat(n / d);
        }
        Scalar::Fn { num, den }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Fn { .. } => None,
        }
    }

    pub fn numerator(&self) -> Poly {
        match self {
            Scalar::Rat(r) => Poly::constant(r.clone()),
            Scalar::Fn { num, .. } => num.clone(),
        }
    }

    pub fn denominator(&self) -> Poly {
        match self {
            Scalar::Rat(_) => Poly::one(),
            Scalar::Fn { den, .. } => den.clone(),
        }
    }

    pub fn vars(&self) -> Vec<VarId> {
        match self {
            Scalar::Rat(_) => Vec::new(),
            Scalar::Fn { num, den } => {
                let mut v = num.vars();
                for w in den.vars() {
                    if !v.contains(&w) {
                        v.push(w);
                    }
                }
                v.sort();
                v
            }
        }
    }

    pub fn inverse(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Scalar::Rat(r) => Ok(Scalar::Rat(Rational::one() / r)),
            Scalar::Fn { num, den } => Ok(Scalar::normalize(den.clone(), num.clone())),
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(self * &rhs.inverse()?)
    }

    /// Evaluate at a rational point; errors if a denominator vanishes there.
    pub fn eval(&self, point: &BTreeMap<VarId, Rational>) -> Result<Rational> {
        match self {
            Scalar::Rat(r) => Ok(r.clone()),
            Scalar::Fn { num, den } => {
                let d = den.eval(point)?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(num.eval(point)? / d)
            }
        }
    }

    /// Approximate numeric value (for reporting and numeric search paths).
    pub fn eval_f64(&self, point: &BTreeMap<VarId, f64>) -> Result<f64> {
        fn poly_f64(p: &Poly, point: &BTreeMap<VarId, f64>) -> Result<f64> {
            let mut acc = 0.0;
            for (m, c) in p.terms() {
                let mut t = rational_to_f64(c);
                for v in m.vars() {
                    let x = point.get(&v).ok_or_else(|| {
                        Error::Inconsistent(format!(
                            "no value bound for variable {}",
                            super::vars::var_name(v)
                        ))
                    })?;
                    for _ in 0..m.degree_of(v) {
                        t *= x;
                    }
                }
                acc += t;
            }
            Ok(acc)
        }
        match self {
            Scalar::Rat(r) => Ok(rational_to_f64(r)),
            Scalar::Fn { num, den } => {
                let d = poly_f64(den, point)?;
                if d == 0.0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(poly_f64(num, point)? / d)
            }
        }
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of truncated parts for huge entries.
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => {
                let (an, ad) = (self.numerator(), self.denominator());
                let (bn, bd) = (rhs.numerator(), rhs.denominator());
                Scalar::normalize(&(&an * &bd) + &(&bn * &ad), &ad * &bd)
            }
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => {
                let (an, ad) = (self.numerator(), self.denominator());
                let (bn, bd) = (rhs.numerator(), rhs.denominator());
                Scalar::normalize(&an * &bn, &ad * &bd)
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r.clone()),
            Scalar::Fn { num, den } => Scalar::Fn {
                num: -num,
                den: den.clone(),
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

/// Panicking division, for contexts where the divisor is known nonzero.
impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero scalar")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", r),
            Scalar::Fn { num, den } => {
                if den.is_constant() {
                    write!(f, "{}", num)
                } else {
                    write!(f, "({})/({})", num, den)
                }
            }
        }
    }
}
