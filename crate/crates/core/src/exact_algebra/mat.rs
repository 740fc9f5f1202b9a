use super::scalar::{Rational, Scalar};
use super::{sample_point, SideRelation};
use crate::{Error, Result};
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt;

/// Dense row-major matrix of [`Scalar`]s.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Outcome of solving `A x = b`.
pub enum LinearSolution {
    Unique(Vec<Scalar>),
    /// A particular solution plus a nontrivial nullspace basis.
    Underdetermined(Vec<Scalar>, Vec<Vec<Scalar>>),
    Inconsistent,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        Mat::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = Scalar::zero();
            for k in 0..self.cols {
                if !self[(i, k)].is_zero() && !rhs[(k, j)].is_zero() {
                    acc = &acc + &(&self[(i, k)] * &rhs[(k, j)]);
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for k in 0..self.cols {
                    if !self[(i, k)].is_zero() && !v[k].is_zero() {
                        acc = &acc + &(&self[(i, k)] * &v[k]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| c * &self[(i, j)])
    }

    pub fn add(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &rhs[(i, j)])
    }

    pub fn sub(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &rhs[(i, j)])
    }

    pub fn commutator(&self, rhs: &Mat) -> Mat {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    /// All variables appearing in any entry, sorted.
    pub fn vars(&self) -> Vec<super::VarId> {
        let mut out: Vec<super::VarId> = Vec::new();
        for s in &self.data {
            for v in s.vars() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out.sort();
        out
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    ///
    /// The pivot in each step is the first structurally nonzero entry of the
    /// candidate column.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inverse().expect("pivot is nonzero");
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        m[(i, j)] = &m[(i, j)] - &(&f * &m[(r, j)]);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Symbolic rank via exact row reduction.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Nullspace basis; each vector satisfies `M v = 0` exactly.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![Scalar::zero(); self.cols];
            vec[free] = Scalar::one();
            for (col, rowopt) in pivot_set.iter().enumerate() {
                if let Some(row) = rowopt {
                    vec[col] = -&r[(*row, free)];
                }
            }
            basis.push(vec);
        }
        basis
    }

    /// Solve `A x = b` by row reduction of the augmented matrix.
    pub fn solve(&self, b: &[Scalar]) -> LinearSolution {
        assert_eq!(self.rows, b.len());
        let aug = Mat::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return LinearSolution::Inconsistent;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = r[(row, self.cols)].clone();
        }
        if pivots.len() == self.cols {
            LinearSolution::Unique(x)
        } else {
            let null = self.nullspace();
            LinearSolution::Underdetermined(x, null)
        }
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<Mat> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let aug = Mat::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &c)| c != i) {
            return Err(Error::SingularMatrix);
        }
        Ok(Mat::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    pub fn determinant(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Scalar::one();
        }
        // Fraction-wise Gaussian elimination with pivot bookkeeping.
        let mut m = self.clone();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Scalar::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            det = &det * &m[(c, c)];
            let inv = m[(c, c)].inverse().expect("pivot nonzero");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    m[(i, j)] = &m[(i, j)] - &(&f * &m[(c, j)]);
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Evaluate every entry at a rational point.
    pub fn eval(&self, point: &BTreeMap<super::VarId, Rational>) -> Result<Mat> {
        let mut data = Vec::with_capacity(self.data.len());
        for s in &self.data {
            data.push(Scalar::Rat(s.eval(point)?));
        }
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Rank by evaluating the variables at `samples` random rational points
    /// and taking the maximum of the exact numeric ranks. With overwhelming
    /// probability this equals the rank over the rational-function field.
    pub fn rank_generic<R: Rng>(
        &self,
        samples: usize,
        relations: &[SideRelation],
        rng: &mut R,
    ) -> Result<usize> {
        assert!(samples >= 1, "need at least one sample");
        let vars = self.vars();
        let mut best = 0;
        for _ in 0..samples {
            let numeric = self.eval_at_random(&vars, relations, rng)?;
            best = best.max(numeric.rank());
        }
        Ok(best)
    }

    fn eval_at_random<R: Rng>(
        &self,
        vars: &[super::VarId],
        relations: &[SideRelation],
        rng: &mut R,
    ) -> Result<Mat> {
        for _ in 0..super::SAMPLE_RETRIES {
            let point = sample_point(vars, relations, rng)?;
            match self.eval(&point) {
                Ok(m) => return Ok(m),
                Err(Error::DivisionByZero) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::SampleSingular(super::SAMPLE_RETRIES))
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sym(name: &str) -> Scalar {
        Scalar::symbol(name)
    }

    #[test]
    fn nullspace_of_identity_is_empty() {
        assert!(Mat::identity(3).nullspace().is_empty());
    }

    #[test]
    fn nullspace_of_zero_has_full_dimension() {
        let basis = Mat::zeros(2, 3).nullspace();
        assert_eq!(basis.len(), 3);
        let m = Mat::zeros(2, 3);
        for v in &basis {
            assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn rank_nullity_holds_symbolically() {
        // rows (h11, h12) and (2h11, 2h12): rank 1, nullity 1.
        let m = Mat::from_rows(vec![
            vec![sym("h11"), sym("h12")],
            vec![
                &Scalar::from_int(2) * &sym("h11"),
                &Scalar::from_int(2) * &sym("h12"),
            ],
        ]);
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(Scalar::is_zero));
    }

    #[test]
    fn rank_generic_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(Mat::identity(4).rank_generic(1, &[], &mut rng).unwrap(), 4);
    }

    #[test]
    fn rank_generic_proportional_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = Mat::from_rows(vec![
            vec![sym("h11"), sym("h12")],
            vec![
                &Scalar::from_int(2) * &sym("h11"),
                &Scalar::from_int(2) * &sym("h12"),
            ],
        ]);
        assert_eq!(m.rank_generic(3, &[], &mut rng).unwrap(), 1);
    }

    #[test]
    fn inverse_roundtrip_symbolic() {
        let m = Mat::from_rows(vec![
            vec![sym("h11"), sym("h12")],
            vec![sym("h12"), sym("h22")],
        ]);
        let inv = m.inverse().unwrap();
        let id = m.mul(&inv);
        assert_eq!(id, Mat::identity(2));
    }

    #[test]
    fn determinant_2x2() {
        let m = Mat::from_rows(vec![
            vec![sym("h11"), sym("h12")],
            vec![sym("h12"), sym("h22")],
        ]);
        let det = m.determinant();
        let expect = &(&sym("h11") * &sym("h22")) - &(&sym("h12") * &sym("h12"));
        assert_eq!(det, expect);
    }
}
