use super::vars::{var_name, VarId};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Rational = BigRational;

/// Power product of variables, kept sorted by variable id with no zero
/// exponents. Ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_of(&self, v: VarId) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.iter().map(|(v, _)| *v)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: Vec<(VarId, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0, self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Divide by `other`, if every exponent allows it.
    fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            let mut e = e;
            if j < other.0.len() && other.0[j].0 < v {
                return None; // divisor has a variable we lack
            }
            if j < other.0.len() && other.0[j].0 == v {
                if other.0[j].1 > e {
                    return None;
                }
                e -= other.0[j].1;
                j += 1;
            }
            if e > 0 {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    fn without(&self, v: VarId) -> Monomial {
        Monomial(self.0.iter().copied().filter(|(w, _)| *w != v).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Lexicographic tie-break: the earlier variable with the larger
        // exponent wins.
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    // A variable present on one side only: that side has a
                    // positive exponent on the earliest differing variable.
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(&eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(v, e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", var_name(v))?;
            } else {
                write!(f, "{}^{}", var_name(v), e)?;
            }
        }
        Ok(())
    }
}

/// Multivariate polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(Rational::from(BigInt::from(n)))
    }

    pub fn var(v: VarId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), Rational::one());
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn vars(&self) -> Vec<VarId> {
        let mut set = BTreeSet::new();
        for m in self.terms.keys() {
            set.extend(m.vars());
        }
        set.into_iter().collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.keys().map(|m| m.degree_of(v)).max().unwrap_or(0)
    }

    /// Leading (monomial, coefficient) under graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn insert(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Coefficient of `v^e`, as a polynomial in the remaining variables.
    pub fn coeff_wrt(&self, v: VarId, e: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.degree_of(v) == e {
                out.insert(m.without(v), c.clone());
            }
        }
        out
    }

    /// Decompose as `(a, b)` with `self = a*v + b`, assuming `degree_in(v) <= 1`.
    pub fn split_linear(&self, v: VarId) -> (Poly, Poly) {
        (self.coeff_wrt(v, 1), self.coeff_wrt(v, 0))
    }

    /// Exact multivariate division; `None` when the divisor does not divide.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&(Rational::one() / c)));
        }
        let (dm, dc) = divisor.leading().unwrap();
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().unwrap();
            let qm = rm.div(&dm)?;
            let qc = rc / &dc;
            let mut t = Poly::zero();
            t.insert(qm.clone(), qc.clone());
            quot.insert(qm, qc);
            rem = &rem - &(&t * divisor);
        }
        Some(quot)
    }

    /// Pseudo-remainder of `self` by `divisor` with respect to `main`.
    fn prem(&self, divisor: &Poly, main: VarId) -> Poly {
        let db = divisor.degree_in(main);
        let lb = divisor.coeff_wrt(main, db);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(main) >= db {
            let dr = r.degree_in(main);
            let lr = r.coeff_wrt(main, dr);
            let shift = &Poly::var(main).pow(dr - db) * &lr;
            r = &(&lb * &r) - &(&shift * divisor);
        }
        r
    }

    /// Content with respect to `main`: GCD of the coefficient polynomials.
    fn content_wrt(&self, main: VarId) -> Poly {
        let mut g = Poly::zero();
        for e in 0..=self.degree_in(main) {
            let c = self.coeff_wrt(main, e);
            if !c.is_zero() {
                g = Poly::gcd(&g, &c);
            }
        }
        g
    }

    /// Monic normalization: leading coefficient becomes 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => self.scale(&(Rational::one() / c)),
        }
    }

    /// GCD via primitive pseudo-remainder sequences, returned monic.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_constant() || b.is_constant() {
            return Poly::one();
        }
        let main = *a
            .vars()
            .iter()
            .chain(b.vars().iter())
            .max()
            .expect("nonconstant polynomials have variables");
        if a.degree_in(main) == 0 || b.degree_in(main) == 0 {
            // `main` occurs in only one argument; the gcd cannot involve it.
            let ca = if a.degree_in(main) == 0 {
                a.clone()
            } else {
                a.content_wrt(main)
            };
            let cb = if b.degree_in(main) == 0 {
                b.clone()
            } else {
                b.content_wrt(main)
            };
            return Poly::gcd(&ca, &cb);
        }
        let ca = a.content_wrt(main);
        let cb = b.content_wrt(main);
        let pa = a.div_exact(&ca).expect("content divides");
        let pb = b.div_exact(&cb).expect("content divides");
        let cg = Poly::gcd(&ca, &cb);

        let (mut r0, mut r1) = if pa.degree_in(main) >= pb.degree_in(main) {
            (pa, pb)
        } else {
            (pb, pa)
        };
        loop {
            let rem = r0.prem(&r1, main);
            if rem.is_zero() {
                break;
            }
            if rem.degree_in(main) == 0 {
                // Primitive parts are coprime in `main`.
                r1 = Poly::one();
                break;
            }
            let content = rem.content_wrt(main);
            r0 = r1;
            r1 = rem.div_exact(&content).expect("content divides");
        }
        let g = if r1.is_constant() {
            cg
        } else {
            let content = r1.content_wrt(main);
            let prim = r1.div_exact(&content).expect("content divides");
            &cg * &prim
        };
        g.monic()
    }

    /// Evaluate at a full rational point.
    pub fn eval(
        &self,
        point: &BTreeMap<VarId, Rational>,
    ) -> crate::Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in m.0.iter() {
                let x = point.get(v).ok_or_else(|| {
                    crate::Error::Inconsistent(format!(
                        "no value bound for variable {}",
                        var_name(*v)
                    ))
                })?;
                for _ in 0..*e {
                    term *= x;
                }
            }
            acc += term;
        }
        Ok(acc)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert(m.clone(), -c.clone());
        }
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", mag, m)?;
            }
        }
        Ok(())
    }
}
