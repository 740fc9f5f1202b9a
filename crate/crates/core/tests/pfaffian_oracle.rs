//! Cross-validation of the algebraic Pfaffian system against the
//! coordinate realizations: for known Killing fields Z, the packed initial
//! data u = (zeta^A, F_AB) read off the chart must satisfy X_N u = M_N u
//! at every point.

use homsym::cartan_geometry::{connection_coefficients, FrameMetric};
use homsym::coordinate_realizations::{
    bind_params, lie_derivative_one_form, realization, sample_chart_point, ChartField,
    Realization,
};
use homsym::exact_algebra::{rational_to_f64, Mat, Scalar};
use homsym::killing_closure::{build_pfaffian, pairs};
use homsym::lie_core::{catalog, BianchiType, CatalogEntry};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Frame components zeta^A = sigma^A_a Z^a at a point.
fn frame_components(
    real: &Realization,
    z: &ChartField,
    p: &[f64],
    params: &BTreeMap<String, f64>,
) -> Vec<f64> {
    let zv = z.eval(p, params).unwrap();
    real.sigma
        .iter()
        .map(|s| {
            let sv = s.eval(p, params).unwrap();
            sv.iter().zip(&zv).map(|(a, b)| a * b).sum()
        })
        .collect()
}

/// Psi^A_B = (L_Z sigma^A)_a X_B^a at a point.
fn psi_matrix(
    real: &Realization,
    z: &ChartField,
    p: &[f64],
    params: &BTreeMap<String, f64>,
) -> Vec<Vec<f64>> {
    let n = 3;
    let mut psi = vec![vec![0.0; n]; n];
    for a in 0..n {
        let lie = lie_derivative_one_form(z, &real.sigma[a], p, params).unwrap();
        for b in 0..n {
            let xb = real.inv[b].eval(p, params).unwrap();
            psi[a][b] = lie.iter().zip(&xb).map(|(l, x)| l * x).sum();
        }
    }
    psi
}

/// Packed initial data u(p) = (zeta^A, F_AB) of a field.
fn packed_data(
    real: &Realization,
    hnum: &[Vec<f64>],
    z: &ChartField,
    p: &[f64],
    params: &BTreeMap<String, f64>,
) -> Vec<f64> {
    let n = 3;
    let mut u = frame_components(real, z, p, params);
    let psi = psi_matrix(real, z, p, params);
    for (a, b) in pairs(n) {
        let mut f = 0.0;
        for m in 0..n {
            f += hnum[a - 1][m] * psi[m][b - 1];
        }
        u.push(f);
    }
    u
}

/// Directional derivative of u along X_N via central differences on the
/// chart (the zeta rows are also cross-checked with dual numbers below).
fn directional_u(
    real: &Realization,
    hnum: &[Vec<f64>],
    z: &ChartField,
    p: &[f64],
    big_n: usize,
    params: &BTreeMap<String, f64>,
) -> Vec<f64> {
    let dir = real.inv[big_n].eval(p, params).unwrap();
    let eps = 1e-5;
    let shift = |s: f64| -> Vec<f64> {
        let q: Vec<f64> = p.iter().zip(&dir).map(|(a, d)| a + s * d).collect();
        packed_data(real, hnum, z, &q, params)
    };
    let plus = shift(eps);
    let minus = shift(-eps);
    plus.iter()
        .zip(&minus)
        .map(|(a, b)| (a - b) / (2.0 * eps))
        .collect()
}

fn numeric_h(entry: &CatalogEntry, h: &FrameMetric) -> Vec<Vec<f64>> {
    let _ = entry;
    (1..=3)
        .map(|a| {
            (1..=3)
                .map(|b| rational_to_f64(h.get(a, b).as_rational().unwrap()))
                .collect()
        })
        .collect()
}

fn check_type(entry: &CatalogEntry, h: &FrameMetric, h_names: &[(&str, &Scalar)]) {
    let real = realization(entry).unwrap();
    let mut vals = BTreeMap::new();
    for (name, s) in h_names {
        vals.insert(name.to_string(), rational_to_f64(s.as_rational().unwrap()));
    }
    let params = bind_params(entry, &vals).unwrap();
    let hnum = numeric_h(entry, h);

    let g = connection_coefficients(entry.constants(), h).unwrap();
    let sys = build_pfaffian(entry.constants(), h, &g).unwrap();
    let mats: Vec<Vec<Vec<f64>>> = sys
        .mats
        .iter()
        .map(|m| {
            (0..m.rows())
                .map(|i| {
                    (0..m.cols())
                        .map(|j| rational_to_f64(m[(i, j)].as_rational().unwrap()))
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut fields: Vec<ChartField> = real.xi.clone();
    fields.extend(real.zetas.iter().cloned());

    for z in &fields {
        for _ in 0..4 {
            let p = sample_chart_point(&real, &mut rng);
            let u = packed_data(&real, &hnum, z, &p, &params);
            for big_n in 0..3 {
                let lhs = directional_u(&real, &hnum, z, &p, big_n, &params);
                let rhs: Vec<f64> = mats[big_n]
                    .iter()
                    .map(|row| row.iter().zip(&u).map(|(m, x)| m * x).sum())
                    .collect();
                for (i, (l, r)) in lhs.iter().zip(&rhs).enumerate() {
                    let tol = if i < 3 { 1e-7 } else { 1e-5 };
                    assert!(
                        (l - r).abs() < tol,
                        "{}: component {i} along X_{}: chart {l} vs system {r}",
                        entry.id(),
                        big_n + 1
                    );
                }
            }
        }
    }
}

#[test]
fn type_ii_pfaffian_matches_chart_derivatives() {
    let entry = catalog(BianchiType::II, None).unwrap();
    let h11 = Scalar::from_ratio(3, 2);
    let h22 = Scalar::from_int(2);
    let h23 = Scalar::from_ratio(1, 2);
    let h33 = Scalar::from_ratio(5, 4);
    let mut m = Mat::zeros(3, 3);
    m[(0, 0)] = h11.clone();
    m[(1, 1)] = h22.clone();
    m[(1, 2)] = h23.clone();
    m[(2, 1)] = h23.clone();
    m[(2, 2)] = h33.clone();
    let h = FrameMetric::new(m).unwrap();
    check_type(
        &entry,
        &h,
        &[("h11", &h11), ("h22", &h22), ("h23", &h23), ("h33", &h33)],
    );
}

#[test]
fn type_iii_pfaffian_matches_chart_derivatives() {
    let entry = catalog(BianchiType::III, None).unwrap();
    let h11 = Scalar::from_int(2);
    let h12 = Scalar::from_ratio(1, 2);
    let h22 = Scalar::from_int(1);
    let h33 = Scalar::from_ratio(3, 4);
    let mut m = Mat::zeros(3, 3);
    m[(0, 0)] = h11.clone();
    m[(0, 1)] = h12.clone();
    m[(1, 0)] = h12.clone();
    m[(1, 1)] = h22.clone();
    m[(2, 2)] = h33.clone();
    let h = FrameMetric::new(m).unwrap();
    check_type(
        &entry,
        &h,
        &[("h11", &h11), ("h12", &h12), ("h22", &h22), ("h33", &h33)],
    );
}

#[test]
fn type_v_pfaffian_matches_chart_derivatives_on_variety() {
    // A rational point on the side-relation variety:
    // h = [[1, 3/5], [3/5, 34/25]] gives det2 = 1, so h33 = 1 exactly.
    let entry = catalog(BianchiType::V, None).unwrap();
    let h11 = Scalar::from_int(1);
    let h12 = Scalar::from_ratio(3, 5);
    let h22 = Scalar::from_ratio(34, 25);
    let h33 = Scalar::from_int(1);
    let mut m = Mat::zeros(3, 3);
    m[(0, 0)] = h11.clone();
    m[(0, 1)] = h12.clone();
    m[(1, 0)] = h12.clone();
    m[(1, 1)] = h22.clone();
    m[(2, 2)] = h33.clone();
    let h = FrameMetric::new(m).unwrap();
    check_type(
        &entry,
        &h,
        &[("h11", &h11), ("h12", &h12), ("h22", &h22), ("h33", &h33)],
    );
}
