//! Small dense f64 helpers for the numeric canonicalization paths.

pub type M3 = [[f64; 3]; 3];

pub fn identity() -> M3 {
    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
}

pub fn mul(a: &M3, b: &M3) -> M3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn transpose(a: &M3) -> M3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn det(a: &M3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

pub fn inverse(a: &M3) -> Option<M3> {
    let d = det(a);
    if d.abs() < 1e-300 {
        return None;
    }
    let cof = |r: usize, c: usize| -> f64 {
        let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        let minor = a[rows[0]][cols[0]] * a[rows[1]][cols[1]]
            - a[rows[0]][cols[1]] * a[rows[1]][cols[0]];
        if (r + c) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = cof(j, i) / d;
        }
    }
    Some(out)
}

/// Matrix exponential by scaling and squaring on a truncated series.
pub fn expm(a: &M3, t: f64) -> M3 {
    let mut scaled = *a;
    for row in &mut scaled {
        for v in row.iter_mut() {
            *v *= t;
        }
    }
    let norm: f64 = scaled
        .iter()
        .flatten()
        .fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let factor = 2.0_f64.powi(-(squarings as i32));
    for row in &mut scaled {
        for v in row.iter_mut() {
            *v *= factor;
        }
    }
    let mut sum = identity();
    let mut term = identity();
    for k in 1..=16 {
        term = mul(&term, &scaled);
        for row in &mut term {
            for v in row.iter_mut() {
                *v /= k as f64;
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                sum[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        sum = mul(&sum, &sum);
    }
    sum
}

/// Congruence action `h~ = S^-T h S^-1` of a transform on a metric.
pub fn congruence(h: &M3, s: &M3) -> Option<M3> {
    let sinv = inverse(s)?;
    Some(mul(&mul(&transpose(&sinv), h), &sinv))
}

pub fn leading_minors_positive(h: &M3) -> bool {
    h[0][0] > 0.0
        && (h[0][0] * h[1][1] - h[0][1] * h[1][0]) > 0.0
        && det(h) > 0.0
}
