//! Small dense matrices over Q(i). Only what coordinate changes need:
//! determinant, inverse, matrix-vector products. Sizes are the ambient
//! dimension (2 to a handful), so plain Gaussian elimination is fine.

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    n: usize,
    rows: Vec<Vec<ExactScalar>>,
}

impl Matrix {
    pub fn new(rows: Vec<Vec<ExactScalar>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::structural("matrix must be square and nonempty"));
        }
        Ok(Matrix { n, rows })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { ExactScalar::one() } else { ExactScalar::zero() })
                    .collect()
            })
            .collect();
        Matrix { n, rows }
    }

    pub fn from_columns(cols: &[Vec<ExactScalar>]) -> Result<Self> {
        let n = cols.len();
        if n == 0 || cols.iter().any(|c| c.len() != n) {
            return Err(Error::structural("columns must form a square matrix"));
        }
        let rows = (0..n)
            .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
            .collect();
        Ok(Matrix { n, rows })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &ExactScalar {
        &self.rows[i][j]
    }

    pub fn row(&self, i: usize) -> &[ExactScalar] {
        &self.rows[i]
    }

    pub fn column(&self, j: usize) -> Vec<ExactScalar> {
        (0..self.n).map(|i| self.rows[i][j].clone()).collect()
    }

    pub fn mul_vec(&self, v: &[ExactScalar]) -> Result<Vec<ExactScalar>> {
        if v.len() != self.n {
            return Err(Error::structural("vector length does not match matrix size"));
        }
        Ok(self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(ExactScalar::zero(), |acc, (a, x)| &acc + &(a * x))
            })
            .collect())
    }

    pub fn det(&self) -> ExactScalar {
        // Elimination over the field; pivot on the first nonzero entry.
        let mut m = self.rows.clone();
        let mut det = ExactScalar::one();
        for col in 0..self.n {
            let pivot_row = match (col..self.n).find(|&r| !m[r][col].is_zero()) {
                Some(r) => r,
                None => return ExactScalar::zero(),
            };
            if pivot_row != col {
                m.swap(pivot_row, col);
                det = -det;
            }
            let pivot = m[col][col].clone();
            det = &det * &pivot;
            let pivot_inv = pivot.inv().expect("nonzero pivot");
            for r in col + 1..self.n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] * &pivot_inv;
                for c in col..self.n {
                    let delta = &factor * &m[col][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        // Gauss-Jordan on [A | I].
        let n = self.n;
        let mut a = self.rows.clone();
        let mut b = Matrix::identity(n).rows;
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(pivot_row, col);
            b.swap(pivot_row, col);
            let pivot_inv = a[col][col].inv().ok()?;
            for c in 0..n {
                a[col][c] = &a[col][c] * &pivot_inv;
                b[col][c] = &b[col][c] * &pivot_inv;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for c in 0..n {
                    let da = &factor * &a[col][c];
                    let db = &factor * &b[col][c];
                    a[r][c] = &a[r][c] - &da;
                    b[r][c] = &b[r][c] - &db;
                }
            }
        }
        Some(Matrix { n, rows: b })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    #[test]
    fn det_and_inverse() {
        let m = Matrix::new(vec![
            vec![s(2), s(1)],
            vec![s(1), s(1)],
        ])
        .unwrap();
        assert_eq!(m.det(), s(1));
        let inv = m.inverse().unwrap();
        let v = m.mul_vec(&[s(3), s(4)]).unwrap();
        let back = inv.mul_vec(&v).unwrap();
        assert_eq!(back, vec![s(3), s(4)]);
    }

    #[test]
    fn singular_matrix() {
        let m = Matrix::new(vec![
            vec![s(1), s(2)],
            vec![s(2), s(4)],
        ])
        .unwrap();
        assert!(m.det().is_zero());
        assert!(m.inverse().is_none());
    }

    #[test]
    fn permutation_det_sign() {
        let m = Matrix::from_columns(&[
            vec![s(0), s(1), s(0)],
            vec![s(0), s(0), s(1)],
            vec![s(1), s(0), s(0)],
        ])
        .unwrap();
        assert_eq!(m.det(), s(1));
    }
}
