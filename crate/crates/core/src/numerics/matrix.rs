//! Dense row-major matrices and Householder least squares.

use std::fmt;
use std::ops::{Index, IndexMut};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from row-major data. Panics if the length does not match.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length must equal rows * cols");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * k);
        for r in rows {
            assert_eq!(r.len(), k, "ragged rows");
            data.extend_from_slice(r);
        }
        Matrix { rows: n, cols: k, data }
    }

    pub fn from_columns(columns: &[&[f64]]) -> Self {
        let k = columns.len();
        let n = columns.first().map_or(0, |c| c.len());
        let mut m = Matrix::zeros(n, k);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), n, "ragged columns");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// First `n` rows as a new matrix.
    pub fn head_rows(&self, n: usize) -> Matrix {
        Matrix::from_row_major(n, self.cols, self.data[..n * self.cols].to_vec())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for p in 0..self.cols {
                let a = self[(i, p)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(p, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `Xᵀv`.
    pub fn tr_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, v.len(), "dimension mismatch");
        let mut out = vec![0.0; self.cols];
        for (i, vi) in v.iter().enumerate() {
            for (o, x) in out.iter_mut().zip(self.row(i)) {
                *o += x * vi;
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:>12.6}")).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Relative tolerance on `|r_jj|` (against `‖X‖_F`) below which a column is
/// declared linearly dependent on its predecessors.
pub const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankDeficient {
    /// Zero-based index of the first column that is numerically dependent.
    pub column: usize,
}

#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub beta: Vec<f64>,
    pub xtx_inverse: Matrix,
}

/// Minimizes `‖y − Xβ‖²` through a Householder QR factorization of `X`.
///
/// No column pivoting is done, so a rank failure names the first column that
/// adds nothing to the span of the columns before it.
pub fn solve_least_squares(x: &Matrix, y: &[f64]) -> Result<LeastSquares, RankDeficient> {
    let (n, k) = (x.rows(), x.cols());
    assert_eq!(n, y.len(), "response length must match design rows");
    assert!(n >= k, "least squares needs at least as many rows as columns");

    let scale = x.frobenius_norm();
    let mut a = x.clone();
    let mut qty = y.to_vec();
    let mut v = vec![0.0; n];

    for j in 0..k {
        let norm = (j..n).map(|i| a[(i, j)] * a[(i, j)]).sum::<f64>().sqrt();
        if norm <= RANK_TOLERANCE * scale || norm == 0.0 {
            return Err(RankDeficient { column: j });
        }
        let alpha = if a[(j, j)] > 0.0 { -norm } else { norm };
        for i in j..n {
            v[i] = a[(i, j)];
        }
        v[j] -= alpha;
        let vnorm2: f64 = (j..n).map(|i| v[i] * v[i]).sum();
        if vnorm2 > 0.0 {
            for c in j..k {
                let s: f64 = (j..n).map(|i| v[i] * a[(i, c)]).sum::<f64>() * 2.0 / vnorm2;
                for i in j..n {
                    a[(i, c)] -= s * v[i];
                }
            }
            let s: f64 = (j..n).map(|i| v[i] * qty[i]).sum::<f64>() * 2.0 / vnorm2;
            for i in j..n {
                qty[i] -= s * v[i];
            }
        }
        // a[(j, j)] is now alpha up to rounding; below-diagonal entries are ~0.
        a[(j, j)] = alpha;
        for i in (j + 1)..n {
            a[(i, j)] = 0.0;
        }
    }

    let mut r = Matrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            r[(i, j)] = a[(i, j)];
        }
    }

    let beta = back_substitute(&r, &qty[..k]);
    let r_inv = upper_triangular_inverse(&r);
    let xtx_inverse = r_inv.matmul(&r_inv.transpose());
    Ok(LeastSquares { beta, xtx_inverse })
}

fn back_substitute(r: &Matrix, b: &[f64]) -> Vec<f64> {
    let k = r.rows();
    let mut out = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = b[i];
        for j in (i + 1)..k {
            s -= r[(i, j)] * out[j];
        }
        out[i] = s / r[(i, i)];
    }
    out
}

fn upper_triangular_inverse(r: &Matrix) -> Matrix {
    let k = r.rows();
    let mut inv = Matrix::zeros(k, k);
    for c in 0..k {
        let mut e = vec![0.0; k];
        e[c] = 1.0;
        let col = back_substitute(r, &e);
        for (i, v) in col.into_iter().enumerate() {
            inv[(i, c)] = v;
        }
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_only_model_returns_sample_mean() {
        let y = [3.0, 5.0, 10.0, -2.0];
        let x = Matrix::from_columns(&[&[1.0; 4]]);
        let ls = solve_least_squares(&x, &y).unwrap();
        assert!((ls.beta[0] - 4.0).abs() < 1e-14);
        assert!((ls.xtx_inverse[(0, 0)] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn exact_line_is_interpolated() {
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        let x = Matrix::from_columns(&[&[1.0; 5], &xs]);
        let ls = solve_least_squares(&x, &y).unwrap();
        assert!((ls.beta[0] - 1.0).abs() < 1e-12);
        assert!((ls.beta[1] - 2.0).abs() < 1e-12);
        let fitted = x.mul_vec(&ls.beta);
        for (f, t) in fitted.iter().zip(&y) {
            assert!((f - t).abs() < 1e-12);
        }
    }

    #[test]
    fn duplicated_column_is_reported() {
        let a = [1.0, 2.0, 3.0, 5.0];
        let b = [2.0, 4.0, 6.0, 10.0];
        let x = Matrix::from_columns(&[&[1.0; 4], &a, &b]);
        let err = solve_least_squares(&x, &[1.0, 2.0, 3.0, 4.0]).unwrap_err();
        assert_eq!(err.column, 2);
    }

    #[test]
    fn zero_column_is_reported() {
        let x = Matrix::from_columns(&[&[1.0; 3], &[0.0; 3]]);
        assert_eq!(solve_least_squares(&x, &[1.0, 2.0, 3.0]).unwrap_err().column, 1);
    }

    #[test]
    fn xtx_inverse_times_xtx_is_identity() {
        let x = Matrix::from_rows(&[
            vec![1.0, 0.3, 2.0],
            vec![1.0, -1.2, 0.5],
            vec![1.0, 2.2, -0.7],
            vec![1.0, 0.9, 1.1],
            vec![1.0, -0.4, 3.0],
        ]);
        let ls = solve_least_squares(&x, &[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let xtx = x.transpose().matmul(&x);
        let prod = xtx.matmul(&ls.xtx_inverse);
        let eye = Matrix::identity(3);
        for i in 0..3 {
            for j in 0..3 {
                assert!((prod[(i, j)] - eye[(i, j)]).abs() < 1e-12);
            }
        }
    }
}
