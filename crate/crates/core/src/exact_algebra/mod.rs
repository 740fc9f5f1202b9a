//! Scalar tower and dense linear algebra over it.
//!
//! [`Scalar`] is either an exact rational or a GCD-reduced multivariate
//! rational function in named parameters; [`Mat`] is a dense matrix of
//! scalars. Everything downstream (connection coefficients, curvature,
//! the Killing closure) computes on this substrate.

mod mat;
mod poly;
mod scalar;
mod vars;

pub use mat::{LinearSolution, Mat};
pub use poly::{Monomial, Poly};
pub use scalar::{rational_to_f64, Rational, Scalar};
pub use vars::{var, var_name, VarId};

use rand::Rng;
use std::collections::BTreeMap;

/// Inclusive range from which random-rational numerators/denominators are
/// drawn during generic-rank sampling. Recorded here so reports can cite it.
pub const SAMPLE_RANGE: std::ops::RangeInclusive<u32> = 1..=997;

/// Maximum resampling attempts before a vanishing denominator is an error.
pub const SAMPLE_RETRIES: usize = 32;

/// A polynomial side-relation `var^power = rhs` among metric parameters,
/// e.g. recording that one entry is the square root of a polynomial in the
/// others. Sampling honors the relation by solving for a variable that
/// appears linearly in `var^power - rhs`.
#[derive(Debug, Clone)]
pub struct SideRelation {
    pub var: VarId,
    pub power: u32,
    pub rhs: Poly,
}

impl SideRelation {
    /// Residual polynomial `var^power - rhs`; zero on the constraint variety.
    pub fn residual(&self) -> Poly {
        Poly::var(self.var).pow(self.power) - self.rhs.clone()
    }
}

/// Draw one random nonzero rational with numerator and denominator in
/// [`SAMPLE_RANGE`].
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    let num = rng.gen_range(SAMPLE_RANGE);
    let den = rng.gen_range(SAMPLE_RANGE);
    Rational::new(num.into(), den.into())
}

/// Sample a rational point for `vars`, honoring `relations`.
///
/// Unconstrained variables are drawn uniformly from [`SAMPLE_RANGE`]. For a
/// relation `v^p = rhs`, the constrained value of `v` is drawn first and a
/// variable occurring linearly in the residual is solved for, so the point
/// lies exactly on the constraint variety.
pub fn sample_point<R: Rng>(
    vars: &[VarId],
    relations: &[SideRelation],
    rng: &mut R,
) -> crate::Result<BTreeMap<VarId, Rational>> {
    'attempt: for _ in 0..SAMPLE_RETRIES {
        let mut point: BTreeMap<VarId, Rational> = BTreeMap::new();
        let mut solved: Vec<VarId> = Vec::new();
        for rel in relations {
            // Pick the variable to solve for: linear in the residual and not
            // the constrained variable itself.
            let residual = rel.residual();
            let candidates: Vec<VarId> = residual
                .vars()
                .into_iter()
                .filter(|v| *v != rel.var && residual.degree_in(*v) == 1)
                .collect();
            let target = candidates.last().copied().ok_or_else(|| {
                crate::Error::Unsupported(
                    "side relation has no variable occurring linearly".into(),
                )
            })?;
            solved.push(target);
            // Assign every other residual variable, then solve A*target + B = 0.
            for v in residual.vars() {
                if v != target && !point.contains_key(&v) {
                    point.insert(v, random_rational(rng));
                }
            }
            let (lin, cst) = residual.split_linear(target);
            let a = lin.eval(&point)?;
            let b = cst.eval(&point)?;
            if a.numer() == &num::BigInt::from(0) {
                continue 'attempt;
            }
            point.insert(target, -b / a);
        }
        for v in vars {
            point.entry(*v).or_insert_with(|| random_rational(rng));
        }
        return Ok(point);
    }
    Err(crate::Error::SampleSingular(SAMPLE_RETRIES))
}
