//! Rigid-frame Riemannian data: Ricci rotation coefficients from metricity
//! plus torsion-freeness, curvature from the second structure equation, and
//! the identity suites that pin the sign conventions.
//!
//! Conventions, fixed in one place: the invariant coframe satisfies
//! `d sigma^A = 1/2 C^A_MN sigma^M ^ sigma^N`, so the torsion-free condition
//! reads `gamma^A_[BM] = 1/2 C^A_BM`, and the curvature of the second
//! structure equation comes out as
//! `R^A_BMN = gamma^A_BS C^S_MN + gamma^A_SM gamma^S_BN - gamma^A_SN gamma^S_BM`.
//! The Ricci contraction is `Ric_BN = R^A_BAN`.

use crate::exact_algebra::{Mat, Scalar, SideRelation, VarId};
use crate::lie_core::{CatalogEntry, StructureConstants};
use crate::{Error, Result};

/// Symmetric invertible frame metric `h_AB` over the scalar field, with
/// optional polynomial side-relations among its parameters.
#[derive(Clone, Debug)]
pub struct FrameMetric {
    h: Mat,
    relations: Vec<SideRelation>,
}

impl FrameMetric {
    pub fn new(h: Mat) -> Result<Self> {
        FrameMetric::with_relations(h, Vec::new())
    }

    pub fn with_relations(h: Mat, relations: Vec<SideRelation>) -> Result<Self> {
        if h.rows() != h.cols() {
            return Err(Error::DimensionMismatch("frame metric must be square".into()));
        }
        for i in 0..h.rows() {
            for j in (i + 1)..h.cols() {
                if h[(i, j)] != h[(j, i)] {
                    return Err(Error::Inconsistent(format!(
                        "frame metric not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(FrameMetric { h, relations })
    }

    /// The generic symmetric metric in n(n+1)/2 named parameters `hij`.
    pub fn generic(n: usize) -> Self {
        let h = Mat::from_fn(n, n, |i, j| {
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            Scalar::symbol(&format!("h{}{}", a + 1, b + 1))
        });
        FrameMetric {
            h,
            relations: Vec::new(),
        }
    }

    /// The pattern-generic metric of a catalog entry: symbolic entries in
    /// the printed zero pattern, carrying any side relation.
    pub fn from_pattern(entry: &CatalogEntry) -> Self {
        let p = entry.pattern();
        let h = Mat::from_fn(3, 3, |i, j| match p.entries[i][j] {
            None => Scalar::zero(),
            Some(name) => Scalar::symbol(name),
        });
        FrameMetric {
            h,
            relations: p.relations.clone(),
        }
    }

    /// Diagonal metric from the given entries.
    pub fn diag_rational(entries: &[Scalar]) -> Self {
        let n = entries.len();
        let h = Mat::from_fn(n, n, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                Scalar::zero()
            }
        });
        FrameMetric {
            h,
            relations: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.h.rows()
    }

    pub fn mat(&self) -> &Mat {
        &self.h
    }

    pub fn relations(&self) -> &[SideRelation] {
        &self.relations
    }

    pub fn get(&self, a: usize, b: usize) -> &Scalar {
        &self.h[(a - 1, b - 1)]
    }

    pub fn inverse(&self) -> Result<Mat> {
        self.h.inverse().map_err(|_| Error::SingularMatrix)
    }

    /// All parameters appearing in the entries.
    pub fn vars(&self) -> Vec<VarId> {
        self.h.vars()
    }

    /// Scale by a nonzero constant.
    pub fn scaled(&self, c: &Scalar) -> FrameMetric {
        FrameMetric {
            h: self.h.scale(c),
            relations: self.relations.clone(),
        }
    }

    /// Positive definiteness via leading principal minors; `None` when the
    /// entries are symbolic.
    pub fn is_positive_definite(&self) -> Option<bool> {
        use num::Signed;
        let n = self.dim();
        for k in 1..=n {
            let minor = Mat::from_fn(k, k, |i, j| self.h[(i, j)].clone());
            match minor.determinant() {
                Scalar::Rat(r) => {
                    if !r.is_positive() {
                        return Some(false);
                    }
                }
                Scalar::Fn { .. } => return None,
            }
        }
        Some(true)
    }
}

/// Ricci rotation coefficients `gamma^A_BM`, 1-based accessors.
#[derive(Clone, Debug)]
pub struct ConnectionCoefficients {
    n: usize,
    g: Vec<Scalar>,
}

impl ConnectionCoefficients {
    fn idx(&self, a: usize, b: usize, m: usize) -> usize {
        ((a - 1) * self.n + (b - 1)) * self.n + (m - 1)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize, m: usize) -> &Scalar {
        &self.g[self.idx(a, b, m)]
    }

    /// Lowered antisymmetry residual `h_AS g^S_BM + h_SB g^S_AM`.
    pub fn metricity_residual(&self, h: &FrameMetric) -> Vec<Scalar> {
        let n = self.n;
        let mut out = Vec::new();
        for a in 1..=n {
            for b in 1..=n {
                for m in 1..=n {
                    let mut acc = Scalar::zero();
                    for s in 1..=n {
                        acc = &acc + &(h.get(a, s) * self.get(s, b, m));
                        acc = &acc + &(h.get(s, b) * self.get(s, a, m));
                    }
                    out.push(acc);
                }
            }
        }
        out
    }

    /// Torsion residual `g^A_[BM] - 1/2 C^A_BM`.
    pub fn torsion_residual(&self, c: &StructureConstants) -> Vec<Scalar> {
        let n = self.n;
        let half = Scalar::from_ratio(1, 2);
        let mut out = Vec::new();
        for a in 1..=n {
            for b in 1..=n {
                for m in 1..=n {
                    let anti = &(&half * &(self.get(a, b, m) - self.get(a, m, b)))
                        - &(&half * c.get(a, b, m));
                    out.push(anti);
                }
            }
        }
        out
    }
}

/// The unique connection satisfying metricity and the torsion condition.
///
/// Closed form: with `C_ABM = h_AS C^S_BM`,
/// `gamma_ABM = 1/2 (C_ABM + C_BMA - C_MAB)`, raised with the inverse
/// metric. Validated against the stacked linear-system solve in the tests.
pub fn connection_coefficients(
    c: &StructureConstants,
    h: &FrameMetric,
) -> Result<ConnectionCoefficients> {
    let n = c.dim();
    if h.dim() != n {
        return Err(Error::DimensionMismatch(
            "metric and constants dimensions differ".into(),
        ));
    }
    let hinv = h.inverse()?;
    let lower = |a: usize, b: usize, m: usize| -> Scalar {
        let mut acc = Scalar::zero();
        for s in 1..=n {
            let cs = c.get(s, b, m);
            if !cs.is_zero() {
                acc = &acc + &(h.get(a, s) * cs);
            }
        }
        acc
    };
    let half = Scalar::from_ratio(1, 2);
    let mut g = Vec::with_capacity(n * n * n);
    for a in 1..=n {
        for b in 1..=n {
            for m in 1..=n {
                let mut raised = Scalar::zero();
                for s in 1..=n {
                    let gamma_sbm =
                        &half * &(&(&lower(s, b, m) + &lower(b, m, s)) - &lower(m, s, b));
                    if !gamma_sbm.is_zero() {
                        raised = &raised + &(&hinv[(a - 1, s - 1)] * &gamma_sbm);
                    }
                }
                g.push(raised);
            }
        }
    }
    Ok(ConnectionCoefficients { n, g })
}

/// Frame curvature `R^A_BMN` with derived Ricci tensor and scalar.
#[derive(Clone, Debug)]
pub struct CurvatureTensor {
    n: usize,
    r: Vec<Scalar>,
}

impl CurvatureTensor {
    fn idx(&self, a: usize, b: usize, m: usize, nn: usize) -> usize {
        (((a - 1) * self.n + (b - 1)) * self.n + (m - 1)) * self.n + (nn - 1)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize, m: usize, nn: usize) -> &Scalar {
        &self.r[self.idx(a, b, m, nn)]
    }

    pub fn set(&mut self, a: usize, b: usize, m: usize, nn: usize, v: Scalar) {
        let i = self.idx(a, b, m, nn);
        self.r[i] = v;
    }

    /// Fully lowered components `R_ABMN = h_AS R^S_BMN`.
    pub fn lowered(&self, h: &FrameMetric) -> Vec<Scalar> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n * n * n);
        for a in 1..=n {
            for b in 1..=n {
                for m in 1..=n {
                    for nn in 1..=n {
                        let mut acc = Scalar::zero();
                        for s in 1..=n {
                            let r = self.get(s, b, m, nn);
                            if !r.is_zero() {
                                acc = &acc + &(h.get(a, s) * r);
                            }
                        }
                        out.push(acc);
                    }
                }
            }
        }
        out
    }

    /// Ricci tensor `Ric_BN = R^A_BAN`.
    pub fn ricci(&self) -> Mat {
        let n = self.n;
        Mat::from_fn(n, n, |b, nn| {
            let mut acc = Scalar::zero();
            for a in 1..=n {
                acc = &acc + self.get(a, b + 1, a, nn + 1);
            }
            acc
        })
    }

    /// Scalar curvature `h^BN Ric_BN`.
    pub fn scalar_curvature(&self, h: &FrameMetric) -> Result<Scalar> {
        let hinv = h.inverse()?;
        let ric = self.ricci();
        let n = self.n;
        let mut acc = Scalar::zero();
        for b in 0..n {
            for nn in 0..n {
                if !ric[(b, nn)].is_zero() {
                    acc = &acc + &(&hinv[(b, nn)] * &ric[(b, nn)]);
                }
            }
        }
        Ok(acc)
    }

    /// If `R_ABMN = k (h_AM h_BN - h_AN h_BM)` identically, return `k`.
    pub fn constant_curvature_factor(&self, h: &FrameMetric) -> Option<Scalar> {
        let n = self.n;
        let low = self.lowered(h);
        let at = |a: usize, b: usize, m: usize, nn: usize| {
            &low[(((a - 1) * n + (b - 1)) * n + (m - 1)) * n + (nn - 1)]
        };
        let mut k: Option<Scalar> = None;
        'outer: for a in 1..=n {
            for b in 1..=n {
                let pat = &(h.get(a, a) * h.get(b, b)) - &(h.get(a, b) * h.get(a, b));
                if !pat.is_zero() && !at(a, b, a, b).is_zero() {
                    k = at(a, b, a, b).checked_div(&pat).ok();
                    break 'outer;
                }
            }
        }
        let k = k?;
        for a in 1..=n {
            for b in 1..=n {
                for m in 1..=n {
                    for nn in 1..=n {
                        let expect = &k
                            * &(&(h.get(a, m) * h.get(b, nn)) - &(h.get(a, nn) * h.get(b, m)));
                        if at(a, b, m, nn) != &expect {
                            return None;
                        }
                    }
                }
            }
        }
        Some(k)
    }

    pub fn is_zero(&self) -> bool {
        self.r.iter().all(Scalar::is_zero)
    }
}

/// Curvature report: all frame components in lexicographic index order,
/// with Ricci and scalar, every entry a normalized scalar string.
pub fn curvature_report(r: &CurvatureTensor, h: &FrameMetric) -> Result<serde_json::Value> {
    let n = r.dim();
    let mut components = serde_json::Map::new();
    for a in 1..=n {
        for b in 1..=n {
            for m in 1..=n {
                for nn in 1..=n {
                    components.insert(
                        format!("R^{a}_{b}{m}{nn}"),
                        serde_json::Value::String(r.get(a, b, m, nn).to_string()),
                    );
                }
            }
        }
    }
    let ric = r.ricci();
    let mut ricci = serde_json::Map::new();
    for b in 1..=n {
        for nn in 1..=n {
            ricci.insert(
                format!("Ric_{b}{nn}"),
                serde_json::Value::String(ric[(b - 1, nn - 1)].to_string()),
            );
        }
    }
    Ok(serde_json::json!({
        "components": components,
        "ricci": ricci,
        "scalar_curvature": r.scalar_curvature(h)?.to_string(),
    }))
}

/// Curvature from the second structure equation.
pub fn curvature(g: &ConnectionCoefficients, c: &StructureConstants) -> CurvatureTensor {
    let n = g.dim();
    let mut r = CurvatureTensor {
        n,
        r: vec![Scalar::zero(); n * n * n * n],
    };
    for a in 1..=n {
        for b in 1..=n {
            for m in 1..=n {
                for nn in 1..=n {
                    let mut acc = Scalar::zero();
                    for s in 1..=n {
                        let cs = c.get(s, m, nn);
                        if !cs.is_zero() {
                            acc = &acc + &(g.get(a, b, s) * cs);
                        }
                        acc = &acc + &(g.get(a, s, m) * g.get(s, b, nn));
                        acc = &acc - &(g.get(a, s, nn) * g.get(s, b, m));
                    }
                    r.set(a, b, m, nn, acc);
                }
            }
        }
    }
    r
}

/// Residual report of the curvature/connection identity suite; pass means
/// every residual is structurally zero.
#[derive(Debug)]
pub struct IdentityReport {
    pub cyclic_ok: bool,
    pub pair_symmetry_ok: bool,
    pub lowered_antisymmetry_ok: bool,
    pub mn_antisymmetry_ok: bool,
    pub metricity_ok: bool,
    pub torsion_ok: bool,
}

impl IdentityReport {
    pub fn pass(&self) -> bool {
        self.cyclic_ok
            && self.pair_symmetry_ok
            && self.lowered_antisymmetry_ok
            && self.mn_antisymmetry_ok
            && self.metricity_ok
            && self.torsion_ok
    }
}

/// Run the full identity suite structurally.
pub fn identity_suite(
    r: &CurvatureTensor,
    g: &ConnectionCoefficients,
    h: &FrameMetric,
    c: &StructureConstants,
) -> IdentityReport {
    let n = r.dim();
    let low = r.lowered(h);
    let at = |a: usize, b: usize, m: usize, nn: usize| {
        &low[(((a - 1) * n + (b - 1)) * n + (m - 1)) * n + (nn - 1)]
    };

    let mut cyclic_ok = true;
    let mut pair_ok = true;
    let mut low_anti_ok = true;
    let mut mn_anti_ok = true;
    for a in 1..=n {
        for b in 1..=n {
            for m in 1..=n {
                for nn in 1..=n {
                    let cyc = &(r.get(a, b, m, nn) + r.get(a, m, nn, b)) + r.get(a, nn, b, m);
                    if !cyc.is_zero() {
                        cyclic_ok = false;
                    }
                    if at(a, b, m, nn) != at(m, nn, a, b) {
                        pair_ok = false;
                    }
                    if !(at(a, b, m, nn) + at(b, a, m, nn)).is_zero() {
                        low_anti_ok = false;
                    }
                    if !(r.get(a, b, m, nn) + r.get(a, b, nn, m)).is_zero() {
                        mn_anti_ok = false;
                    }
                }
            }
        }
    }
    IdentityReport {
        cyclic_ok,
        pair_symmetry_ok: pair_ok,
        lowered_antisymmetry_ok: low_anti_ok,
        mn_antisymmetry_ok: mn_anti_ok,
        metricity_ok: g.metricity_residual(h).iter().all(Scalar::is_zero),
        torsion_ok: g.torsion_residual(c).iter().all(Scalar::is_zero),
    }
}
