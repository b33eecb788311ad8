//! Small dense matrices.
//!
//! Everything here is sized by the half-period `k` (rarely above 16), so a
//! row-major `Vec<f64>` with partial-pivot Gaussian elimination is all the
//! linear algebra the toolkit needs.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut, Mul};

use crate::math::max_abs;

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
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: f64) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| v[i] * self[(i, j)]).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.data)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        crate::math::norm2(&self.data)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    pub fn determinant(&self) -> f64 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        match Lu::factor(self) {
            Some(lu) => lu.determinant(),
            None => 0.0,
        }
    }

    /// Solves `self · x = b`; `None` when a pivot is exactly zero.
    pub fn solve(&self, b: &[f64]) -> Option<Vec<f64>> {
        Lu::factor(self).map(|lu| lu.solve(b))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows);
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|l| self[(i, l)] * rhs[(l, j)]).sum()
        })
    }
}

/// LU factorisation with partial pivoting.
struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    fn factor(a: &Matrix) -> Option<Self> {
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for col in 0..n {
            let pivot =
                (col..n).max_by(|&i, &j| lu[(i, col)].abs().total_cmp(&lu[(j, col)].abs()))?;
            if lu[(pivot, col)] == 0.0 {
                return None;
            }
            if pivot != col {
                for j in 0..n {
                    let tmp = lu[(col, j)];
                    lu[(col, j)] = lu[(pivot, j)];
                    lu[(pivot, j)] = tmp;
                }
                perm.swap(col, pivot);
                sign = -sign;
            }
            for i in col + 1..n {
                let factor = lu[(i, col)] / lu[(col, col)];
                lu[(i, col)] = factor;
                for j in col + 1..n {
                    lu[(i, j)] -= factor * lu[(col, j)];
                }
            }
        }
        Some(Lu { lu, perm, sign })
    }

    fn determinant(&self) -> f64 {
        (0..self.lu.rows).fold(self.sign, |d, i| d * self.lu[(i, i)])
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.rows;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[(i, j)] * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }
}
