use crate::exact_algebra::{Mat, Scalar};
use crate::{Error, Result};
use num::BigInt;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

/// Structure constants `C^A_BC` of a real Lie algebra, antisymmetric in the
/// lower pair. All indices are 1-based.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StructureConstants {
    n: usize,
    c: Vec<Scalar>,
}

impl StructureConstants {
    pub fn zeros(n: usize) -> Self {
        StructureConstants {
            n,
            c: vec![Scalar::zero(); n * n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        debug_assert!(
            (1..=self.n).contains(&a) && (1..=self.n).contains(&b) && (1..=self.n).contains(&c)
        );
        ((a - 1) * self.n + (b - 1)) * self.n + (c - 1)
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &Scalar {
        &self.c[self.idx(a, b, c)]
    }

    /// Set `C^a_bc = value` and its antisymmetric partner.
    pub fn set_pair(&mut self, a: usize, b: usize, c: usize, value: Scalar) {
        let i = self.idx(a, b, c);
        let j = self.idx(a, c, b);
        self.c[j] = -&value;
        self.c[i] = value;
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(Scalar::is_zero)
    }

    pub fn antisymmetry_ok(&self) -> bool {
        for a in 1..=self.n {
            for b in 1..=self.n {
                for c in 1..=self.n {
                    if !(self.get(a, b, c) + self.get(a, c, b)).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Jacobi residual tensor
    /// `J^A_BCD = sum_M (C^A_MB C^M_CD + C^A_MC C^M_DB + C^A_MD C^M_BC)`.
    pub fn jacobi_residual(&self) -> Vec<Scalar> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n * n * n);
        for a in 1..=n {
            for b in 1..=n {
                for c in 1..=n {
                    for d in 1..=n {
                        let mut acc = Scalar::zero();
                        for m in 1..=n {
                            acc = &acc + &(self.get(a, m, b) * self.get(m, c, d));
                            acc = &acc + &(self.get(a, m, c) * self.get(m, d, b));
                            acc = &acc + &(self.get(a, m, d) * self.get(m, b, c));
                        }
                        out.push(acc);
                    }
                }
            }
        }
        out
    }

    /// Pass iff every Jacobi residual component is structurally zero.
    pub fn jacobi_check(&self) -> Result<()> {
        if self.jacobi_residual().iter().all(Scalar::is_zero) {
            Ok(())
        } else {
            Err(Error::JacobiViolation)
        }
    }

    /// Adjoint matrix of basis element K: `(ad_K)^A_B = C^A_KB`.
    pub fn adjoint(&self, k: usize) -> Result<Mat> {
        if !(1..=self.n).contains(&k) {
            return Err(Error::IndexOutOfRange(format!(
                "adjoint index {} not in 1..={}",
                k, self.n
            )));
        }
        Ok(Mat::from_fn(self.n, self.n, |i, j| {
            self.get(i + 1, k, j + 1).clone()
        }))
    }

    /// Dimension of the center `{v : C^A_KB v^K = 0 for all A, B}`.
    pub fn center_dim(&self) -> usize {
        let n = self.n;
        let mut rows = Vec::new();
        for a in 1..=n {
            for b in 1..=n {
                rows.push((1..=n).map(|k| self.get(a, k, b).clone()).collect());
            }
        }
        Mat::from_rows(rows).nullspace().len()
    }

    /// All symbolic parameters appearing in the constants.
    pub fn vars(&self) -> Vec<crate::exact_algebra::VarId> {
        let mut out = Vec::new();
        for s in &self.c {
            for v in s.vars() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out.sort();
        out
    }

    /// Evaluate symbolic entries at a rational point; numeric constants
    /// pass through unchanged.
    pub fn eval(
        &self,
        point: &std::collections::BTreeMap<crate::exact_algebra::VarId, num::BigRational>,
    ) -> Result<StructureConstants> {
        if self.vars().is_empty() {
            return Ok(self.clone());
        }
        let mut c = Vec::with_capacity(self.c.len());
        for s in &self.c {
            c.push(Scalar::rat(s.eval(point)?));
        }
        Ok(StructureConstants { n: self.n, c })
    }

    /// Push the constants through an invertible change of basis `S`:
    /// `C'^A_MN = S^A_B C^B_KL (S^-1)^K_M (S^-1)^L_N`.
    pub fn conjugate(&self, s: &Mat) -> Result<StructureConstants> {
        let n = self.n;
        let sinv = s.inverse()?;
        let mut out = StructureConstants::zeros(n);
        for a in 1..=n {
            for m in 1..=n {
                for nn in 1..=n {
                    let mut acc = Scalar::zero();
                    for b in 1..=n {
                        for k in 1..=n {
                            for l in 1..=n {
                                let c = self.get(b, k, l);
                                if c.is_zero() {
                                    continue;
                                }
                                let term = &(&s[(a - 1, b - 1)] * c)
                                    * &(&sinv[(k - 1, m - 1)] * &sinv[(l - 1, nn - 1)]);
                                acc = &acc + &term;
                            }
                        }
                    }
                    let i = out.idx(a, m, nn);
                    out.c[i] = acc;
                }
            }
        }
        Ok(out)
    }

    /// True when `S` preserves the constants: `S^A_B C^B_MN = C^A_KL S^K_M S^L_N`.
    pub fn preserved_by(&self, s: &Mat) -> bool {
        let n = self.n;
        for a in 1..=n {
            for m in 1..=n {
                for nn in 1..=n {
                    let mut lhs = Scalar::zero();
                    for b in 1..=n {
                        lhs = &lhs + &(&s[(a - 1, b - 1)] * self.get(b, m, nn));
                    }
                    let mut rhs = Scalar::zero();
                    for k in 1..=n {
                        for l in 1..=n {
                            let c = self.get(a, k, l);
                            if !c.is_zero() {
                                rhs = &rhs + &(&(c * &s[(k - 1, m - 1)]) * &s[(l - 1, nn - 1)]);
                            }
                        }
                    }
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Numeric residual of form preservation, for witnesses computed in
    /// floating point.
    pub fn preservation_residual_f64(&self, s: &[Vec<f64>]) -> f64 {
        let n = self.n;
        let c = |a: usize, b: usize, d: usize| -> f64 {
            self.get(a, b, d)
                .as_rational()
                .map(crate::exact_algebra::rational_to_f64)
                .unwrap_or(f64::NAN)
        };
        let mut worst: f64 = 0.0;
        for a in 1..=n {
            for m in 1..=n {
                for nn in 1..=n {
                    let mut lhs = 0.0;
                    for b in 1..=n {
                        lhs += s[a - 1][b - 1] * c(b, m, nn);
                    }
                    let mut rhs = 0.0;
                    for k in 1..=n {
                        for l in 1..=n {
                            rhs += c(a, k, l) * s[k - 1][m - 1] * s[l - 1][nn - 1];
                        }
                    }
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
        worst
    }
}

#[derive(Serialize, Deserialize)]
struct ConstantsDto {
    n: usize,
    entries: Vec<EntryDto>,
}

#[derive(Serialize, Deserialize)]
struct EntryDto {
    #[serde(rename = "A")]
    a: usize,
    #[serde(rename = "B")]
    b: usize,
    #[serde(rename = "C")]
    c: usize,
    value: String,
}

/// Parse a catalog value string: an exact rational like `-3/2` or a symbol
/// name like `q`.
pub fn parse_value(s: &str) -> Result<Scalar> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::InvalidParameter("empty value string".into()));
    }
    let looks_numeric = t
        .chars()
        .next()
        .map(|c| c.is_ascii_digit() || c == '-' || c == '+')
        .unwrap_or(false);
    if looks_numeric {
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n, d),
            None => (t, "1"),
        };
        let n = BigInt::from_str(num.trim())
            .map_err(|_| Error::InvalidParameter(format!("bad rational `{t}`")))?;
        let d = BigInt::from_str(den.trim())
            .map_err(|_| Error::InvalidParameter(format!("bad rational `{t}`")))?;
        if d == BigInt::from(0) {
            return Err(Error::InvalidParameter(format!("zero denominator in `{t}`")));
        }
        return Ok(Scalar::rat(num::BigRational::new(n, d)));
    }
    if t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Ok(Scalar::symbol(t));
    }
    Err(Error::InvalidParameter(format!("bad value string `{t}`")))
}

impl StructureConstants {
    /// Serialize to the structure-constants file format: only `B < C`
    /// entries are stored.
    pub fn to_json(&self) -> Result<String> {
        let mut entries = Vec::new();
        for a in 1..=self.n {
            for b in 1..=self.n {
                for c in (b + 1)..=self.n {
                    let v = self.get(a, b, c);
                    if !v.is_zero() {
                        entries.push(EntryDto {
                            a,
                            b,
                            c,
                            value: v.to_string(),
                        });
                    }
                }
            }
        }
        Ok(serde_json::to_string_pretty(&ConstantsDto {
            n: self.n,
            entries,
        })?)
    }

    /// Load from the structure-constants file format. Only `B < C` entries
    /// are accepted; antisymmetry is synthesized.
    pub fn from_json(json: &str) -> Result<StructureConstants> {
        let dto: ConstantsDto = serde_json::from_str(json)?;
        if dto.n == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        let mut out = StructureConstants::zeros(dto.n);
        for e in &dto.entries {
            if e.a < 1 || e.a > dto.n || e.b < 1 || e.b > dto.n || e.c < 1 || e.c > dto.n {
                return Err(Error::IndexOutOfRange(format!(
                    "entry ({}, {}, {}) out of range for n = {}",
                    e.a, e.b, e.c, dto.n
                )));
            }
            if e.b >= e.c {
                return Err(Error::InvalidParameter(format!(
                    "entry ({}, {}, {}) must satisfy B < C; antisymmetric \
                     partners are implied",
                    e.a, e.b, e.c
                )));
            }
            if !out.get(e.a, e.b, e.c).is_zero() {
                return Err(Error::InvalidParameter(format!(
                    "duplicate entry ({}, {}, {})",
                    e.a, e.b, e.c
                )));
            }
            out.set_pair(e.a, e.b, e.c, parse_value(&e.value)?);
        }
        Ok(out)
    }
}
