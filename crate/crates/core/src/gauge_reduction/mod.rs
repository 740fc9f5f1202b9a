//! Inner-automorphism gauge action on frame metrics: the infinitesimal
//! variation, finite structure-preserving transforms, the gauge rank, and
//! the sparsity canonicalization that reproduces the catalog patterns.

mod canonicalize;
pub mod numeric;

pub use canonicalize::{canonicalize, Canonicalization, WitnessFactor, WitnessKind};

use crate::cartan_geometry::FrameMetric;
use crate::exact_algebra::{Mat, Scalar};
use crate::lie_core::StructureConstants;
use crate::{Error, Result};
use rand::SeedableRng;

/// Linear map from gauge parameters to symmetric metric deltas:
/// `delta h_AB(eps) = h_AM C^M_NB eps^N + h_MB C^M_NA eps^N`, assembled as
/// an n(n+1)/2 x n matrix over the symmetric-pair rows (A <= B,
/// lexicographic).
#[derive(Clone, Debug)]
pub struct GaugeVariation {
    pub mat: Mat,
    pub sym_pairs: Vec<(usize, usize)>,
}

pub fn gauge_variation(c: &StructureConstants, h: &FrameMetric) -> GaugeVariation {
    let n = c.dim();
    let mut sym_pairs = Vec::new();
    for a in 1..=n {
        for b in a..=n {
            sym_pairs.push((a, b));
        }
    }
    let mat = Mat::from_fn(sym_pairs.len(), n, |row, col| {
        let (a, b) = sym_pairs[row];
        let nn = col + 1;
        let mut acc = Scalar::zero();
        for m in 1..=n {
            let c1 = c.get(m, nn, b);
            if !c1.is_zero() {
                acc = &acc + &(h.get(a, m) * c1);
            }
            let c2 = c.get(m, nn, a);
            if !c2.is_zero() {
                acc = &acc + &(h.get(m, b) * c2);
            }
        }
        acc
    });
    GaugeVariation { mat, sym_pairs }
}

/// Rank of the gauge variation and the residual parameter count
/// `n(n+1)/2 - rank`.
pub fn gauge_rank(c: &StructureConstants, h: &FrameMetric) -> Result<(usize, usize)> {
    let gv = gauge_variation(c, h);
    let rank = if gv.mat.vars().is_empty() {
        gv.mat.rank()
    } else {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(crate::DEFAULT_SEED);
        gv.mat.rank_generic(3, h.relations(), &mut rng)?
    };
    let n = c.dim();
    Ok((rank, n * (n + 1) / 2 - rank))
}

/// How a finite transform was produced.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Product of one-parameter inner factors exp(t ad_K).
    Inner,
    /// Used outer derivation directions as well (still an automorphism).
    Automorphism,
    /// The abelian exception: any invertible matrix preserves C = 0.
    AbelianGl,
}

/// Invertible structure-constants-preserving matrix:
/// `S^A_B C^B_MN = C^A_KL S^K_M S^L_N`.
#[derive(Clone, Debug)]
pub struct FiniteTransform {
    pub s: Mat,
    pub provenance: Provenance,
    /// Human-readable factor list, e.g. `exp(t ad_2), t = 3/4`.
    pub factors: Vec<String>,
}

impl FiniteTransform {
    pub fn identity(n: usize) -> Self {
        FiniteTransform {
            s: Mat::identity(n),
            provenance: Provenance::Inner,
            factors: Vec::new(),
        }
    }

    /// Structural check of the defining invariant.
    pub fn preserves(&self, c: &StructureConstants) -> bool {
        c.preserved_by(&self.s)
    }
}

/// Exponential of `t ad_K` in exact arithmetic.
///
/// Handled cases: nilpotent ad_K (exact polynomial in the given t) and
/// commuting diagonal-plus-nilpotent splits whose diagonal is rational. In
/// the latter case t must be symbolic; the scaling is expressed through a
/// fresh positive parameter u = exp(t/L), with L the common denominator of
/// the diagonal. Rotation-type adjoints have no rational exponential and
/// are rejected; the numeric canonicalization path covers them.
pub fn exp_inner(c: &StructureConstants, k: usize, t: &Scalar) -> Result<FiniteTransform> {
    let n = c.dim();
    let ad = c.adjoint(k)?;
    let diag = Mat::from_fn(n, n, |i, j| {
        if i == j {
            ad[(i, j)].clone()
        } else {
            Scalar::zero()
        }
    });
    let nil = ad.sub(&diag);

    // The split must commute and the off-diagonal part must be nilpotent.
    if !diag.mul(&nil).sub(&nil.mul(&diag)).is_zero() {
        return Err(Error::Unsupported(format!(
            "ad_{k} mixes scaling and rotation; no exact exponential"
        )));
    }
    let mut power = Mat::identity(n);
    let mut exp_nil = Mat::identity(n);
    let mut factorial = Scalar::one();
    let mut tpow = Scalar::one();
    for j in 1..=n {
        power = power.mul(&nil);
        if power.is_zero() {
            break;
        }
        if j == n {
            return Err(Error::Unsupported(format!(
                "ad_{k} has a non-nilpotent off-diagonal part"
            )));
        }
        factorial = &factorial * &Scalar::from_int(j as i64);
        tpow = &tpow * t;
        exp_nil = exp_nil.add(&power.scale(&tpow.checked_div(&factorial)?));
    }

    let factors;
    let s = if diag.is_zero() {
        factors = vec![format!("exp(t ad_{k}), t = {t}")];
        exp_nil
    } else {
        // Diagonal entries must be rational to express exp(tD) through a
        // single parameter u.
        let mut entries = Vec::with_capacity(n);
        for i in 0..n {
            match diag[(i, i)].as_rational() {
                Some(r) => entries.push(r.clone()),
                None => {
                    return Err(Error::Unsupported(format!(
                        "ad_{k} has symbolic diagonal entries"
                    )))
                }
            }
        }
        if t.as_rational().is_some() && !t.is_zero() {
            return Err(Error::Unsupported(format!(
                "exp(t ad_{k}) is transcendental for numeric t; \
                 pass a symbolic t or use the numeric path"
            )));
        }
        if t.is_zero() {
            return Ok(FiniteTransform::identity(n));
        }
        use num::{BigInt, One, Signed};
        let mut lcm = BigInt::one();
        for e in &entries {
            lcm = num::integer::lcm(lcm, e.denom().abs());
        }
        let u = Scalar::symbol("u");
        let exp_diag = Mat::from_fn(n, n, |i, j| {
            if i != j {
                return Scalar::zero();
            }
            let p = (&entries[i] * num::BigRational::from_integer(lcm.clone()))
                .to_integer();
            // u^p with integer p of either sign.
            let mut acc = Scalar::one();
            let step = if p.is_negative() {
                u.inverse().expect("u is nonzero")
            } else {
                u.clone()
            };
            let reps = p.abs();
            let mut count = BigInt::from(0);
            while count < reps {
                acc = &acc * &step;
                count += 1;
            }
            acc
        });
        factors = vec![format!("exp(t ad_{k}), u = exp(t/{lcm})")];
        exp_diag.mul(&exp_nil)
    };
    let ft = FiniteTransform {
        s,
        provenance: Provenance::Inner,
        factors,
    };
    if !ft.preserves(c) {
        return Err(Error::Inconsistent(format!(
            "exp(t ad_{k}) failed the form-preservation check"
        )));
    }
    Ok(ft)
}

/// Push a frame metric through a finite transform:
/// `h~_MN = h_AB (S^-1)^A_M (S^-1)^B_N`.
pub fn transform_metric(h: &FrameMetric, s: &FiniteTransform) -> Result<FrameMetric> {
    let sinv = s.s.inverse().map_err(|_| Error::SingularMatrix)?;
    let ht = sinv.transpose().mul(h.mat()).mul(&sinv);
    FrameMetric::with_relations(ht, h.relations().to_vec())
}

/// Is `candidate` inside the span of `basis` (as flattened matrices)?
pub(crate) fn in_span(basis: &[Mat], candidate: &Mat) -> bool {
    let n = candidate.rows();
    let flat = |m: &Mat| -> Vec<Scalar> {
        let mut v = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                v.push(m[(i, j)].clone());
            }
        }
        v
    };
    if basis.is_empty() {
        return candidate.is_zero();
    }
    let rows: Vec<Vec<Scalar>> = basis.iter().map(&flat).collect();
    let base_rank = Mat::from_rows(rows.clone()).rank();
    let mut with = rows;
    with.push(flat(candidate));
    Mat::from_rows(with).rank() == base_rank
}

/// Variable-free check used by the numeric paths.
pub(crate) fn numeric_entries(h: &FrameMetric) -> Result<Vec<Vec<f64>>> {
    let n = h.dim();
    let mut out = vec![vec![0.0; n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = match h.mat()[(i, j)].as_rational() {
                Some(r) => crate::exact_algebra::rational_to_f64(r),
                None => {
                    return Err(Error::Unsupported(
                        "canonicalization needs a numeric metric".into(),
                    ))
                }
            };
        }
    }
    Ok(out)
}
