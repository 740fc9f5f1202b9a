//! The symmetry closure: the Killing equations of a locally homogeneous
//! space reduce to a linear Pfaffian system in the unknowns (zeta^A, F_AB)
//! with constant coefficient matrices. Its integrability constraints
//! determine the full isometry algebra dimension and the initial data of
//! every induced Killing field beyond the homogeneity group.
//!
//! Derivation, fixed here once: with `Psi^A_B = h^AM F_MB` the isometry
//! condition gives the derivative rules
//! `X_N zeta^A = Psi^A_N - C^A_MN zeta^M` and
//! `X_N Psi^A_B = Psi^A_M g^M_BN - g^A_MN Psi^M_B - g^A_BM Psi^M_N`,
//! so each frame derivative is `X_N u = M_N u`. Cross-differentiation
//! yields the constraints `([M_P, M_Q] - C^N_PQ M_N) u = 0`, which are
//! propagated with further `M_R` multiplications until the constraint
//! space stabilizes.

use crate::cartan_geometry::{connection_coefficients, ConnectionCoefficients, FrameMetric};
use crate::exact_algebra::{sample_point, Mat, Scalar};
use crate::lie_core::StructureConstants;
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Initial datum of a Killing field at the base point: frame components
/// `zeta^A` and the antisymmetric matrix `F_AB`.
#[derive(Clone, Debug)]
pub struct KillingInitialData {
    pub zeta: Vec<Scalar>,
    pub f: Mat,
}

impl KillingInitialData {
    fn from_packed(n: usize, u: &[Scalar]) -> Self {
        let zeta = u[..n].to_vec();
        let mut f = Mat::zeros(n, n);
        for (k, (a, b)) in pairs(n).into_iter().enumerate() {
            f[(a - 1, b - 1)] = u[n + k].clone();
            f[(b - 1, a - 1)] = -&u[n + k];
        }
        KillingInitialData { zeta, f }
    }

    pub fn f_is_zero(&self) -> bool {
        self.f.is_zero()
    }
}

/// Index pairs (A, B) with A < B, 1-based, lexicographic.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in (a + 1)..=n {
            out.push((a, b));
        }
    }
    out
}

/// The Pfaffian system `X_N u = M_N u` over the packed unknowns
/// `u = (zeta^1..zeta^n, F_12, F_13, ..., F_(n-1)n)`.
#[derive(Clone, Debug)]
pub struct PfaffianSystem {
    pub n: usize,
    pub m: usize,
    pub mats: Vec<Mat>,
}

/// Assemble the Pfaffian system from the structure constants, metric and
/// its connection.
pub fn build_pfaffian(
    c: &StructureConstants,
    h: &FrameMetric,
    g: &ConnectionCoefficients,
) -> Result<PfaffianSystem> {
    let n = c.dim();
    if h.dim() != n || g.dim() != n {
        return Err(Error::DimensionMismatch(
            "pfaffian inputs disagree on dimension".into(),
        ));
    }
    let m = n + n * (n - 1) / 2;
    let hinv = h.inverse()?;
    let prs = pairs(n);

    let mut mats = Vec::with_capacity(n);
    for big_n in 1..=n {
        let mut mat = Mat::zeros(m, m);
        // Column by column: push a unit initial datum through the two
        // derivative rules.
        for col in 0..m {
            let mut zeta = vec![Scalar::zero(); n];
            let mut f = Mat::zeros(n, n);
            if col < n {
                zeta[col] = Scalar::one();
            } else {
                let (a, b) = prs[col - n];
                f[(a - 1, b - 1)] = Scalar::one();
                f[(b - 1, a - 1)] = Scalar::from_int(-1);
            }
            // Psi^A_B = h^AM F_MB
            let psi = hinv.mul(&f);

            // X_N zeta^A = Psi^A_N - C^A_MN zeta^M
            for a in 1..=n {
                let mut acc = psi[(a - 1, big_n - 1)].clone();
                for mm in 1..=n {
                    let cc = c.get(a, mm, big_n);
                    if !cc.is_zero() && !zeta[mm - 1].is_zero() {
                        acc = &acc - &(cc * &zeta[mm - 1]);
                    }
                }
                mat[(a - 1, col)] = acc;
            }

            // X_N Psi^S_B, then lower the first index with h.
            let dpsi = Mat::from_fn(n, n, |s0, b0| {
                let (s, b) = (s0 + 1, b0 + 1);
                let mut acc = Scalar::zero();
                for mm in 1..=n {
                    acc = &acc + &(&psi[(s - 1, mm - 1)] * g.get(mm, b, big_n));
                    acc = &acc - &(g.get(s, mm, big_n) * &psi[(mm - 1, b - 1)]);
                    acc = &acc - &(g.get(s, b, mm) * &psi[(mm - 1, big_n - 1)]);
                }
                acc
            });
            for (k, (a, b)) in prs.iter().enumerate() {
                let mut acc = Scalar::zero();
                for s in 1..=n {
                    if !dpsi[(s - 1, b - 1)].is_zero() {
                        acc = &acc + &(h.get(*a, s) * &dpsi[(s - 1, b - 1)]);
                    }
                }
                // The symmetric part of X_N F must vanish identically;
                // verify on the antisymmetric partner.
                let mut partner = Scalar::zero();
                for s in 1..=n {
                    if !dpsi[(s - 1, a - 1)].is_zero() {
                        partner = &partner + &(h.get(*b, s) * &dpsi[(s - 1, a - 1)]);
                    }
                }
                if !(&acc + &partner).is_zero() {
                    return Err(Error::Inconsistent(
                        "derivative of F lost antisymmetry".into(),
                    ));
                }
                mat[(n + k, col)] = acc;
            }
        }
        mats.push(mat);
    }
    Ok(PfaffianSystem { n, m, mats })
}

/// Integrability constraint matrices `K_PQ = [M_P, M_Q] - C^N_PQ M_N`.
pub fn constraint_matrices(c: &StructureConstants, sys: &PfaffianSystem) -> Vec<Mat> {
    let n = sys.n;
    let mut out = Vec::new();
    for (p, q) in pairs(n) {
        let mut k = sys.mats[p - 1].commutator(&sys.mats[q - 1]);
        for big_n in 1..=n {
            let cc = c.get(big_n, p, q);
            if !cc.is_zero() {
                k = k.sub(&sys.mats[big_n - 1].scale(cc));
            }
        }
        out.push(k);
    }
    out
}

/// How ranks over symbolic entries are computed during closure.
#[derive(Copy, Clone, Debug)]
pub enum ClosureMode {
    /// Exact row reduction over the rational-function field.
    Symbolic,
    /// Evaluate the system at random rational points on the side-relation
    /// variety and close each sample exactly; the generic answer is the
    /// minimum dimension over samples.
    Sampled { samples: usize, seed: u64 },
}

impl Default for ClosureMode {
    fn default() -> Self {
        ClosureMode::Sampled {
            samples: 3,
            seed: crate::DEFAULT_SEED,
        }
    }
}

/// Outcome of the closure iteration.
#[derive(Clone, Debug)]
pub struct ClosureResult {
    pub n: usize,
    pub m: usize,
    pub d_total: usize,
    pub constraint_rank: usize,
    pub rounds: usize,
    /// Basis of admissible initial data (at the sampled point in sampled
    /// mode).
    pub admissible: Vec<KillingInitialData>,
}

/// Compute the isometry-algebra dimension and the admissible initial data.
///
/// In sampled mode the metric (and any symbolic structure parameter) is
/// evaluated at a random rational point on the side-relation variety
/// first, and each sample is closed exactly; the generic answer is the
/// minimum dimension over samples.
pub fn closure_dimension(
    c: &StructureConstants,
    h: &FrameMetric,
    mode: ClosureMode,
) -> Result<ClosureResult> {
    c.jacobi_check()?;
    match mode {
        ClosureMode::Symbolic => {
            let g = connection_coefficients(c, h)?;
            let sys = build_pfaffian(c, h, &g)?;
            let ks = constraint_matrices(c, &sys);
            close(&sys, &ks)
        }
        ClosureMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut vars = h.mat().vars();
            for v in c.vars() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            vars.sort();
            let mut best: Option<ClosureResult> = None;
            for _ in 0..samples.max(1) {
                let res = loop {
                    let point = sample_point(&vars, h.relations(), &mut rng)?;
                    let attempt = (|| -> Result<ClosureResult> {
                        let hs = FrameMetric::new(h.mat().eval(&point)?)?;
                        let cs = c.eval(&point)?;
                        let g = connection_coefficients(&cs, &hs)?;
                        let sys = build_pfaffian(&cs, &hs, &g)?;
                        let ks = constraint_matrices(&cs, &sys);
                        close(&sys, &ks)
                    })();
                    match attempt {
                        Ok(r) => break r,
                        Err(Error::DivisionByZero) | Err(Error::SingularMatrix) => continue,
                        Err(e) => return Err(e),
                    }
                };
                best = Some(match best {
                    None => res,
                    Some(prev) if res.d_total < prev.d_total => res,
                    Some(prev) => prev,
                });
            }
            Ok(best.expect("at least one sample"))
        }
    }
}

/// The closure iteration proper: grow the constraint row space with
/// `M_R`-propagations until the rank stabilizes.
fn close(sys: &PfaffianSystem, ks: &[Mat]) -> Result<ClosureResult> {
    let m = sys.m;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for k in ks {
        for i in 0..m {
            let row: Vec<Scalar> = (0..m).map(|j| k[(i, j)].clone()).collect();
            if row.iter().any(|s| !s.is_zero()) {
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return finish(sys, Mat::zeros(0, m), 0, 0);
    }

    let mut basis = reduce_basis(Mat::from_rows(rows));
    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > m + 1 {
            return Err(Error::IterationCap(m + 1));
        }
        let rank = basis.rows();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for i in 0..basis.rows() {
            rows.push((0..m).map(|j| basis[(i, j)].clone()).collect());
        }
        for mat in &sys.mats {
            // Row-vector propagation: d(w u) = w M_R u, so append w M_R.
            let prod = basis.mul(mat);
            for i in 0..prod.rows() {
                let row: Vec<Scalar> = (0..m).map(|j| prod[(i, j)].clone()).collect();
                if row.iter().any(|s| !s.is_zero()) {
                    rows.push(row);
                }
            }
        }
        let grown = reduce_basis(Mat::from_rows(rows));
        if grown.rows() == rank {
            return finish(sys, grown, rank, rounds);
        }
        basis = grown;
    }
}

/// Row-echelon basis of the row space (nonzero rows of the rref).
fn reduce_basis(m: Mat) -> Mat {
    let (r, pivots) = m.rref();
    let rank = pivots.len();
    Mat::from_fn(rank, m.cols(), |i, j| r[(i, j)].clone())
}

fn finish(
    sys: &PfaffianSystem,
    constraints: Mat,
    rank: usize,
    rounds: usize,
) -> Result<ClosureResult> {
    let d_total = sys.m - rank;
    // Convention self-check: the n homogeneity solutions (zeta free, F = 0)
    // are always admissible, and the dimension can never exceed the
    // maximally-symmetric count. A violation is an assembly bug, not a
    // mathematical outcome.
    if d_total < sys.n || d_total > sys.m {
        return Err(Error::Inconsistent(format!(
            "closure produced d_total = {} outside [{}, {}]",
            d_total, sys.n, sys.m
        )));
    }
    let admissible: Vec<KillingInitialData> = if constraints.rows() == 0 {
        // No constraints at all: every initial datum is admissible.
        (0..sys.m)
            .map(|k| {
                let mut u = vec![Scalar::zero(); sys.m];
                u[k] = Scalar::one();
                KillingInitialData::from_packed(sys.n, &u)
            })
            .collect()
    } else {
        constraints
            .nullspace()
            .into_iter()
            .map(|u| KillingInitialData::from_packed(sys.n, &u))
            .collect()
    };
    debug_assert_eq!(admissible.len(), d_total);
    Ok(ClosureResult {
        n: sys.n,
        m: sys.m,
        d_total,
        constraint_rank: rank,
        rounds,
        admissible,
    })
}

/// Initial data of the induced Killing fields: the admissible space modulo
/// the n-dimensional homogeneity subspace (zeta free, F = 0).
///
/// The quotient is realized by selecting admissible basis vectors whose
/// F-parts are independent; their count is exactly `d_total - n`.
pub fn extra_killing_data(closure: &ClosureResult) -> Vec<KillingInitialData> {
    let n = closure.n;
    let fdim = n * (n - 1) / 2;
    let mut out: Vec<KillingInitialData> = Vec::new();
    let mut frows: Vec<Vec<Scalar>> = Vec::new();
    for datum in &closure.admissible {
        let mut frow = Vec::with_capacity(fdim);
        for (a, b) in pairs(n) {
            frow.push(datum.f[(a - 1, b - 1)].clone());
        }
        if frow.iter().all(Scalar::is_zero) {
            continue;
        }
        let mut candidate = frows.clone();
        candidate.push(frow.clone());
        if Mat::from_rows(candidate).rank() > frows.len() {
            frows.push(frow);
            out.push(datum.clone());
        }
    }
    debug_assert_eq!(out.len(), closure.d_total - n);
    out
}

/// Classification against the bounds `n <= d_total <= n(n+1)/2`.
#[derive(Copy, Clone, PartialEq, Eq, Debug, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryClass {
    ExactHomogeneity,
    Extra,
    Maximal,
}

pub fn maximal_symmetry_check(d_total: usize, n: usize) -> Result<SymmetryClass> {
    let max = n * (n + 1) / 2;
    if d_total < n || d_total > max {
        return Err(Error::Inconsistent(format!(
            "d_total = {d_total} violates the bounds [{n}, {max}]"
        )));
    }
    Ok(if d_total == max {
        SymmetryClass::Maximal
    } else if d_total == n {
        SymmetryClass::ExactHomogeneity
    } else {
        SymmetryClass::Extra
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan_geometry::FrameMetric;
    use crate::lie_core::{catalog, BianchiType};

    fn pattern_closure(ty: BianchiType, mode: ClosureMode) -> ClosureResult {
        let entry = catalog(ty, ty.sample_q()).unwrap();
        let h = FrameMetric::from_pattern(&entry);
        closure_dimension(entry.constants(), &h, mode).unwrap()
    }

    #[test]
    fn type_i_pfaffian_has_only_psi_coupling() {
        let entry = catalog(BianchiType::I, None).unwrap();
        let h = FrameMetric::from_pattern(&entry);
        let g = connection_coefficients(entry.constants(), &h).unwrap();
        let sys = build_pfaffian(entry.constants(), &h, &g).unwrap();
        for mat in &sys.mats {
            // zeta-rows couple only to F-columns; F-rows vanish.
            for i in 0..3 {
                for j in 0..3 {
                    assert!(mat[(i, j)].is_zero());
                }
            }
            for i in 3..6 {
                for j in 0..6 {
                    assert!(mat[(i, j)].is_zero());
                }
            }
        }
    }

    #[test]
    fn catalog_dimensions_symbolic() {
        let expect = [
            (BianchiType::I, 6),
            (BianchiType::II, 4),
            (BianchiType::III, 4),
            (BianchiType::IV, 3),
            (BianchiType::V, 6),
            (BianchiType::VI, 3),
            (BianchiType::VII, 3),
            (BianchiType::VIII, 3),
            (BianchiType::IX, 3),
        ];
        for (ty, d) in expect {
            let res = pattern_closure(ty, ClosureMode::Symbolic);
            assert_eq!(res.d_total, d, "{ty}");
        }
    }

    #[test]
    fn catalog_dimensions_sampled() {
        for ty in BianchiType::ALL {
            let entry = catalog(ty, ty.sample_q()).unwrap();
            let sym = pattern_closure(ty, ClosureMode::Symbolic);
            let smp = pattern_closure(ty, ClosureMode::default());
            assert_eq!(sym.d_total, smp.d_total, "{ty}");
            assert_eq!(sym.d_total, entry.expected().d_total, "{ty}");
        }
    }

    #[test]
    fn type_ix_specializations() {
        let entry = catalog(BianchiType::IX, None).unwrap();
        let mk = |a: i64, b: i64, c: i64| {
            FrameMetric::diag_rational(&[
                Scalar::from_int(a),
                Scalar::from_int(b),
                Scalar::from_int(c),
            ])
        };
        let d = |h: &FrameMetric| {
            closure_dimension(entry.constants(), h, ClosureMode::Symbolic)
                .unwrap()
                .d_total
        };
        assert_eq!(d(&mk(1, 1, 1)), 6);
        assert_eq!(d(&mk(1, 1, 4)), 4);
        assert_eq!(d(&mk(1, 2, 3)), 3);
    }

    #[test]
    fn round_type_ix_is_constant_curvature() {
        // Cross-check of the maximal case against the curvature pattern.
        let entry = catalog(BianchiType::IX, None).unwrap();
        let h = FrameMetric::diag_rational(&[Scalar::one(), Scalar::one(), Scalar::one()]);
        let g = connection_coefficients(entry.constants(), &h).unwrap();
        let r = crate::cartan_geometry::curvature(&g, entry.constants());
        assert!(r.constant_curvature_factor(&h).is_some());
        let res = closure_dimension(entry.constants(), &h, ClosureMode::Symbolic).unwrap();
        assert_eq!(res.d_total, 6);
    }

    #[test]
    fn extra_data_counts() {
        let expect = [
            (BianchiType::I, 3),
            (BianchiType::II, 1),
            (BianchiType::III, 1),
            (BianchiType::IV, 0),
            (BianchiType::V, 3),
            (BianchiType::VIII, 0),
        ];
        for (ty, count) in expect {
            let res = pattern_closure(ty, ClosureMode::Symbolic);
            let extra = extra_killing_data(&res);
            assert_eq!(extra.len(), count, "{ty}");
            for datum in &extra {
                assert!(!datum.f_is_zero());
            }
        }
    }

    #[test]
    fn type_v_without_side_relation_still_maximal() {
        // The unconstrained-h33 variant of the type V pattern.
        let entry = catalog(BianchiType::V, None).unwrap();
        let h = FrameMetric::new(FrameMetric::from_pattern(&entry).mat().clone()).unwrap();
        assert!(h.relations().is_empty());
        let res = closure_dimension(entry.constants(), &h, ClosureMode::Symbolic).unwrap();
        assert_eq!(res.d_total, 6);
        assert_eq!(extra_killing_data(&res).len(), 3);
    }

    #[test]
    fn vi_vii_dimension_across_q() {
        use crate::exact_algebra::Scalar as S;
        for q in [S::from_int(-1), S::from_int(2), S::from_ratio(1, 2)] {
            let entry = catalog(BianchiType::VI, Some(q)).unwrap();
            let h = FrameMetric::from_pattern(&entry);
            let res =
                closure_dimension(entry.constants(), &h, ClosureMode::Symbolic).unwrap();
            assert_eq!(res.d_total, 3);
        }
        for q in [S::from_int(0), S::from_int(1)] {
            let entry = catalog(BianchiType::VII, Some(q)).unwrap();
            let h = FrameMetric::from_pattern(&entry);
            let res =
                closure_dimension(entry.constants(), &h, ClosureMode::Symbolic).unwrap();
            assert_eq!(res.d_total, 3);
        }
    }

    #[test]
    fn scaling_leaves_dimension_unchanged() {
        let entry = catalog(BianchiType::II, None).unwrap();
        let h = FrameMetric::from_pattern(&entry);
        let hs = h.scaled(&Scalar::from_ratio(5, 2));
        let a = closure_dimension(entry.constants(), &h, ClosureMode::Symbolic).unwrap();
        let b = closure_dimension(entry.constants(), &hs, ClosureMode::Symbolic).unwrap();
        assert_eq!(a.d_total, b.d_total);
    }

    #[test]
    fn admissible_data_satisfy_all_constraints() {
        let entry = catalog(BianchiType::III, None).unwrap();
        let h = FrameMetric::from_pattern(&entry);
        let g = connection_coefficients(entry.constants(), &h).unwrap();
        let sys = build_pfaffian(entry.constants(), &h, &g).unwrap();
        let ks = constraint_matrices(entry.constants(), &sys);
        let res = closure_dimension(entry.constants(), &h, ClosureMode::Symbolic).unwrap();
        for datum in &res.admissible {
            let mut u: Vec<Scalar> = datum.zeta.clone();
            for (a, b) in pairs(3) {
                u.push(datum.f[(a - 1, b - 1)].clone());
            }
            for k in &ks {
                assert!(k.mul_vec(&u).iter().all(Scalar::is_zero));
            }
        }
    }

    #[test]
    fn symmetry_classification() {
        assert_eq!(
            maximal_symmetry_check(6, 3).unwrap(),
            SymmetryClass::Maximal
        );
        assert_eq!(
            maximal_symmetry_check(3, 3).unwrap(),
            SymmetryClass::ExactHomogeneity
        );
        assert_eq!(maximal_symmetry_check(4, 3).unwrap(), SymmetryClass::Extra);
        assert!(maximal_symmetry_check(2, 3).is_err());
        assert!(maximal_symmetry_check(7, 3).is_err());
    }
}
