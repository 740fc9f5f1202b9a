use super::fields::{
    contract, killing_residual_metric, lie_bracket_eval, lie_derivative_one_form, ChartField,
    CoordinateMetric,
};
use super::tables::{FieldRef, Realization};
use crate::exact_algebra::rational_to_f64;
use crate::lie_core::CatalogEntry;
use crate::Result;
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// Max-norm residuals of the defining relations of a realization.
#[derive(Debug, Serialize)]
pub struct StructureReport {
    /// `[xi_A, xi_B] - C^M_AB xi_M`
    pub xi_bracket: f64,
    /// `[X_A, X_B] + C^M_AB X_M`
    pub x_bracket: f64,
    /// `[xi_A, X_B]`
    pub mixed_bracket: f64,
    /// `X_A . sigma^B - delta`
    pub duality: f64,
    /// `L_xi sigma^B`
    pub xi_drag_sigma: f64,
}

impl StructureReport {
    pub fn max(&self) -> f64 {
        self.xi_bracket
            .max(self.x_bracket)
            .max(self.mixed_bracket)
            .max(self.duality)
            .max(self.xi_drag_sigma)
    }
}

/// Draw a point uniformly from the realization's safe box.
pub fn sample_chart_point<R: Rng>(real: &Realization, rng: &mut R) -> Vec<f64> {
    real.sample_box
        .iter()
        .map(|(lo, hi)| rng.gen_range(*lo..*hi))
        .collect()
}

/// Verify the frame relations of the realization at the given points.
pub fn check_structure(
    entry: &CatalogEntry,
    real: &Realization,
    points: &[Vec<f64>],
    params: &BTreeMap<String, f64>,
) -> Result<StructureReport> {
    let n = 3;
    let c = |m: usize, a: usize, b: usize| -> f64 {
        entry
            .constants()
            .get(m, a, b)
            .as_rational()
            .map(rational_to_f64)
            .unwrap_or(f64::NAN)
    };
    let mut rep = StructureReport {
        xi_bracket: 0.0,
        x_bracket: 0.0,
        mixed_bracket: 0.0,
        duality: 0.0,
        xi_drag_sigma: 0.0,
    };
    for p in points {
        for a in 0..n {
            for b in 0..n {
                // [xi_a, xi_b] = +C^m_ab xi_m
                let br = lie_bracket_eval(&real.xi[a], &real.xi[b], p, params)?;
                let mut expect = vec![0.0; n];
                for m in 0..n {
                    let coef = c(m + 1, a + 1, b + 1);
                    let xim = real.xi[m].eval(p, params)?;
                    for i in 0..n {
                        expect[i] += coef * xim[i];
                    }
                }
                for i in 0..n {
                    rep.xi_bracket = rep.xi_bracket.max((br[i] - expect[i]).abs());
                }

                // [X_a, X_b] = -C^m_ab X_m
                let br = lie_bracket_eval(&real.inv[a], &real.inv[b], p, params)?;
                let mut expect = vec![0.0; n];
                for m in 0..n {
                    let coef = -c(m + 1, a + 1, b + 1);
                    let xm = real.inv[m].eval(p, params)?;
                    for i in 0..n {
                        expect[i] += coef * xm[i];
                    }
                }
                for i in 0..n {
                    rep.x_bracket = rep.x_bracket.max((br[i] - expect[i]).abs());
                }

                // [xi_a, X_b] = 0
                let br = lie_bracket_eval(&real.xi[a], &real.inv[b], p, params)?;
                for v in &br {
                    rep.mixed_bracket = rep.mixed_bracket.max(v.abs());
                }

                // X_a . sigma^b = delta_a^b
                let d = contract(&real.inv[a], &real.sigma[b], p, params)?;
                let expect = if a == b { 1.0 } else { 0.0 };
                rep.duality = rep.duality.max((d - expect).abs());

                // L_{xi_a} sigma^b = 0
                let ld = lie_derivative_one_form(&real.xi[a], &real.sigma[b], p, params)?;
                for v in &ld {
                    rep.xi_drag_sigma = rep.xi_drag_sigma.max(v.abs());
                }
            }
        }
    }
    Ok(rep)
}

/// Killing residual of a chart field against the coordinate metric built
/// from the realization's coframe and bound metric values.
pub fn killing_residual(
    entry: &CatalogEntry,
    real: &Realization,
    z: &ChartField,
    point: &[f64],
    params: &BTreeMap<String, f64>,
) -> Result<f64> {
    let n = 3;
    let mut h = vec![vec![0.0; n]; n];
    for (i, row) in entry.pattern().entries.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if let Some(name) = e {
                h[i][j] = *params.get(*name).ok_or_else(|| {
                    crate::Error::Inconsistent(format!("missing metric value {name}"))
                })?;
            }
        }
    }
    let metric = CoordinateMetric {
        sigma: &real.sigma,
        h,
    };
    killing_residual_metric(&metric, z, point, params)
}

/// Verify the enlarged-algebra table: every generator pair must reproduce
/// its listed right-hand side (unlisted pairs vanish, as the tables list
/// all nonvanishing commutators). Types without induced fields carry no
/// table and nothing is checked. Returns the max residual.
pub fn enlarged_algebra_check(
    real: &Realization,
    points: &[Vec<f64>],
    params: &BTreeMap<String, f64>,
) -> Result<f64> {
    if real.enlarged.is_empty() {
        return Ok(0.0);
    }
    let field = |r: FieldRef| -> &ChartField {
        match r {
            FieldRef::Xi(i) => &real.xi[i],
            FieldRef::Zeta(i) => &real.zetas[i],
        }
    };
    let mut gens: Vec<FieldRef> = (0..real.xi.len()).map(FieldRef::Xi).collect();
    gens.extend((0..real.zetas.len()).map(FieldRef::Zeta));

    let mut worst = 0.0_f64;
    for p in points {
        for &ga in &gens {
            for &gb in &gens {
                if ga == gb {
                    continue;
                }
                let br = lie_bracket_eval(field(ga), field(gb), p, params)?;
                let mut expect = [0.0; 3];
                if let Some(rel) = real
                    .enlarged
                    .iter()
                    .find(|r| r.lhs == (ga, gb) || r.lhs == (gb, ga))
                {
                    let sign = if rel.lhs == (ga, gb) { 1.0 } else { -1.0 };
                    for (coef, fr) in &rel.rhs {
                        let cval = coef.eval(p, params)?;
                        let f = field(*fr).eval(p, params)?;
                        for i in 0..3 {
                            expect[i] += sign * cval * f[i];
                        }
                    }
                }
                for i in 0..3 {
                    worst = worst.max((br[i] - expect[i]).abs());
                }
            }
        }
    }
    Ok(worst)
}
