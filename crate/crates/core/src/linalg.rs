//! Small dense matrices over a [`Scalar`].

use serde::Serialize;

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Matrix<S> {
    pub rows: Vec<Vec<S>>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(r: usize, c: usize) -> Self {
        Matrix { rows: vec![vec![S::zero(); c]; r] }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        Matrix { rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.rows[r][c]
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Columns `start..start + width`.
    pub fn column_block(&self, start: usize, width: usize) -> Self {
        Matrix {
            rows: self.rows.iter().map(|r| r[start..start + width].to_vec()).collect(),
        }
    }

    /// Determinant by Gaussian elimination. Exact backends pivot on the first
    /// nonzero entry; floating backends pivot on the largest modulus.
    pub fn determinant(&self) -> S {
        let n = self.nrows();
        assert_eq!(n, self.ncols(), "determinant of a non-square matrix");
        let mut a = self.rows.clone();
        let mut det = S::one();
        for col in 0..n {
            let pivot = if S::EXACT {
                (col..n).find(|&r| !a[r][col].is_zero())
            } else {
                (col..n)
                    .filter(|&r| !a[r][col].is_zero())
                    .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
            };
            let Some(p) = pivot else {
                return S::zero();
            };
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            let piv = a[col][col].clone();
            det = det * piv.clone();
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone() / piv.clone();
                for c in col..n {
                    let v = a[col][c].clone() * f.clone();
                    a[r][c] = a[r][c].clone() - v;
                }
            }
        }
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRat;

    #[test]
    fn determinant_of_small_matrices() {
        let g = GaussRat::from_i64;
        let m = Matrix::from_rows(vec![vec![g(0), g(1)], vec![g(1), g(0)]]);
        assert_eq!(m.determinant(), g(-1));
        let m = Matrix::from_rows(vec![
            vec![g(2), g(0), g(1)],
            vec![g(1), g(3), g(2)],
            vec![g(1), g(1), g(2)],
        ]);
        assert_eq!(m.determinant(), g(6));
        let singular = Matrix::from_rows(vec![vec![g(1), g(2)], vec![g(2), g(4)]]);
        assert_eq!(singular.determinant(), g(0));
    }
}
