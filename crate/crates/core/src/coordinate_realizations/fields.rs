use super::expr::{Dual, Expr};
use crate::Result;
use std::collections::BTreeMap;

/// Vector field or one-form on a coordinate chart: n component expressions.
#[derive(Clone, Debug)]
pub struct ChartField {
    pub components: Vec<Expr>,
}

impl ChartField {
    pub fn new(components: Vec<Expr>) -> Self {
        ChartField { components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, point: &[f64], params: &BTreeMap<String, f64>) -> Result<Vec<f64>> {
        self.components.iter().map(|c| c.eval(point, params)).collect()
    }

    /// Components together with derivatives along `dir`.
    pub fn eval_dual(
        &self,
        point: &[f64],
        dir: &[f64],
        params: &BTreeMap<String, f64>,
    ) -> Result<Vec<Dual>> {
        self.components
            .iter()
            .map(|c| c.eval_dual(point, dir, params))
            .collect()
    }

    /// Jacobian `J[a][b] = d (component a) / d x^b` via n dual sweeps.
    pub fn jacobian(
        &self,
        point: &[f64],
        params: &BTreeMap<String, f64>,
    ) -> Result<Vec<Vec<f64>>> {
        let n = point.len();
        let mut j = vec![vec![0.0; n]; n.max(self.dim())];
        for b in 0..n {
            let mut dir = vec![0.0; n];
            dir[b] = 1.0;
            for (a, c) in self.components.iter().enumerate() {
                j[a][b] = c.eval_dual(point, &dir, params)?.d;
            }
        }
        j.truncate(self.dim());
        Ok(j)
    }
}

/// Pointwise Lie bracket `[V, W]^a = V^b d_b W^a - W^b d_b V^a`.
pub fn lie_bracket_eval(
    v: &ChartField,
    w: &ChartField,
    point: &[f64],
    params: &BTreeMap<String, f64>,
) -> Result<Vec<f64>> {
    let vv = v.eval(point, params)?;
    let wv = w.eval(point, params)?;
    let dw = w.eval_dual(point, &vv, params)?; // d_b W^a V^b
    let dv = v.eval_dual(point, &wv, params)?; // d_b V^a W^b
    Ok(dw.iter().zip(dv.iter()).map(|(a, b)| a.d - b.d).collect())
}

/// Lie derivative of a one-form along a vector field:
/// `(L_V w)_a = V^c d_c w_a + w_c d_a V^c`.
pub fn lie_derivative_one_form(
    v: &ChartField,
    w: &ChartField,
    point: &[f64],
    params: &BTreeMap<String, f64>,
) -> Result<Vec<f64>> {
    let n = point.len();
    let vv = v.eval(point, params)?;
    let wv = w.eval(point, params)?;
    let dw = w.eval_dual(point, &vv, params)?; // V^c d_c w_a
    let mut out = vec![0.0; n];
    for a in 0..n {
        let mut dir = vec![0.0; n];
        dir[a] = 1.0;
        let dv = v.eval_dual(point, &dir, params)?; // d_a V^c
        let mut acc = dw[a].d;
        for c in 0..n {
            acc += wv[c] * dv[c].d;
        }
        out[a] = acc;
    }
    Ok(out)
}

/// Contraction of a vector field with a one-form.
pub fn contract(
    v: &ChartField,
    w: &ChartField,
    point: &[f64],
    params: &BTreeMap<String, f64>,
) -> Result<f64> {
    let vv = v.eval(point, params)?;
    let wv = w.eval(point, params)?;
    Ok(vv.iter().zip(wv.iter()).map(|(a, b)| a * b).sum())
}

/// Coordinate metric `g_ab = h_AB sigma^A_a sigma^B_b` assembled from the
/// coframe and numeric frame-metric values, with its first derivatives.
pub struct CoordinateMetric<'a> {
    pub sigma: &'a [ChartField],
    pub h: Vec<Vec<f64>>,
}

impl CoordinateMetric<'_> {
    pub fn eval(&self, point: &[f64], params: &BTreeMap<String, f64>) -> Result<Vec<Vec<f64>>> {
        let n = point.len();
        let s: Vec<Vec<f64>> = self
            .sigma
            .iter()
            .map(|f| f.eval(point, params))
            .collect::<Result<_>>()?;
        let mut g = vec![vec![0.0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let mut acc = 0.0;
                for (cap_a, row) in self.h.iter().enumerate() {
                    for (cap_b, &hab) in row.iter().enumerate() {
                        acc += hab * s[cap_a][a] * s[cap_b][b];
                    }
                }
                g[a][b] = acc;
            }
        }
        Ok(g)
    }

    /// `d g_ab / d x^c` for one fixed `c`, via dual evaluation of the
    /// coframe components.
    pub fn derivative(
        &self,
        point: &[f64],
        c: usize,
        params: &BTreeMap<String, f64>,
    ) -> Result<Vec<Vec<f64>>> {
        let n = point.len();
        let mut dir = vec![0.0; n];
        dir[c] = 1.0;
        let s: Vec<Vec<Dual>> = self
            .sigma
            .iter()
            .map(|f| f.eval_dual(point, &dir, params))
            .collect::<Result<_>>()?;
        let mut dg = vec![vec![0.0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let mut acc = 0.0;
                for (cap_a, row) in self.h.iter().enumerate() {
                    for (cap_b, &hab) in row.iter().enumerate() {
                        acc += hab * (s[cap_a][a].d * s[cap_b][b].v + s[cap_a][a].v * s[cap_b][b].d);
                    }
                }
                dg[a][b] = acc;
            }
        }
        Ok(dg)
    }
}

/// Killing residual `(L_Z g)_ab = Z^c d_c g_ab + g_cb d_a Z^c + g_ac d_b Z^c`,
/// returned as its max norm over components.
pub fn killing_residual_metric(
    metric: &CoordinateMetric<'_>,
    z: &ChartField,
    point: &[f64],
    params: &BTreeMap<String, f64>,
) -> Result<f64> {
    let n = point.len();
    let g = metric.eval(point, params)?;
    let zv = z.eval(point, params)?;
    let mut lie = vec![vec![0.0; n]; n];
    for c in 0..n {
        let dg = metric.derivative(point, c, params)?;
        for a in 0..n {
            for b in 0..n {
                lie[a][b] += zv[c] * dg[a][b];
            }
        }
    }
    for a in 0..n {
        let mut dir = vec![0.0; n];
        dir[a] = 1.0;
        let dz = z.eval_dual(point, &dir, params)?; // d_a Z^c
        for b in 0..n {
            for c in 0..n {
                lie[a][b] += g[c][b] * dz[c].d;
            }
        }
    }
    for b in 0..n {
        let mut dir = vec![0.0; n];
        dir[b] = 1.0;
        let dz = z.eval_dual(point, &dir, params)?; // d_b Z^c
        for a in 0..n {
            for c in 0..n {
                lie[a][b] += g[a][c] * dz[c].d;
            }
        }
    }
    Ok(lie
        .iter()
        .flatten()
        .fold(0.0_f64, |acc, v| acc.max(v.abs())))
}
