use rug::Float;

use super::complex::{pow2, BigComplex};
use super::NumericsError;

/// Small dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BigComplex>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, prec: u32) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![BigComplex::zero(prec); rows * cols],
        }
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        let mut m = Self::zeros(n, n, prec);
        for i in 0..n {
            m.set(i, i, BigComplex::one(prec));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigComplex>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[Vec<i64>], prec: u32) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| BigComplex::from_i64(prec, v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn prec(&self) -> u32 {
        self.data.iter().map(|v| v.prec()).max().unwrap_or(64)
    }

    pub fn get(&self, i: usize, j: usize) -> &BigComplex {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigComplex) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigComplex] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigComplex>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows, self.prec());
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let prec = self.prec().max(rhs.prec());
        let mut out = Matrix::zeros(self.rows, rhs.cols, prec);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = BigComplex::zero(prec);
                for k in 0..self.cols {
                    acc += &(self.get(i, k) * rhs.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn scale(&self, k: &BigComplex) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * k).collect(),
        }
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn max_abs(&self) -> Float {
        super::roots::max_abs(&self.data)
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, rhs: &Matrix) -> Float {
        let diffs: Vec<BigComplex> = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        super::roots::max_abs(&diffs)
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> BigComplex {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let prec = self.prec();
        let mut a = self.clone();
        let mut det = BigComplex::one(prec);
        for k in 0..n {
            let piv = (k..n)
                .max_by(|&i, &j| {
                    a.get(i, k)
                        .abs()
                        .partial_cmp(&a.get(j, k).abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .expect("nonempty range");
            if a.get(piv, k).is_zero() {
                return BigComplex::zero(prec);
            }
            if piv != k {
                a.swap_rows(piv, k);
                det = -det;
            }
            let pivot = a.get(k, k).clone();
            det *= &pivot;
            for i in (k + 1)..n {
                let factor = a.get(i, k).try_div(&pivot).unwrap_or_else(|_| BigComplex::zero(prec));
                if factor.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = a.get(i, j) - &(&factor * a.get(k, j));
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Matrix, NumericsError> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let prec = self.prec();
        let mut a = self.clone();
        let mut inv = Matrix::identity(n, prec);
        for k in 0..n {
            let piv = (k..n)
                .max_by(|&i, &j| {
                    a.get(i, k)
                        .abs()
                        .partial_cmp(&a.get(j, k).abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .expect("nonempty range");
            a.swap_rows(piv, k);
            inv.swap_rows(piv, k);
            let pivot_inv = a.get(k, k).recip().map_err(|_| NumericsError::Singular)?;
            for j in 0..n {
                a.set(k, j, a.get(k, j) * &pivot_inv);
                inv.set(k, j, inv.get(k, j) * &pivot_inv);
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let factor = a.get(i, k).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a.set(i, j, a.get(i, j) - &(&factor * a.get(k, j)));
                    inv.set(i, j, inv.get(i, j) - &(&factor * inv.get(k, j)));
                }
            }
        }
        Ok(inv)
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// `true` when `self^T == -self` entry for entry, with an exactly zero diagonal.
    pub fn is_exactly_skew(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        (0..self.rows).all(|i| {
            (i..self.cols).all(|j| {
                let a = self.get(i, j);
                let b = self.get(j, i);
                (a + b).is_zero()
            })
        })
    }

    /// `self * other ≈ I` within `2^(-P+24)` scaled by the condition estimate.
    pub fn inverse_check(&self, inverse: &Matrix) -> Float {
        let prod = self.mul(inverse);
        let id = Matrix::identity(self.rows, self.prec());
        prod.max_abs_diff(&id)
    }

    pub fn inverse_tolerance(&self, inverse: &Matrix) -> Float {
        let prec = self.prec();
        let cond = Float::with_val(prec, self.max_abs() * inverse.max_abs()) * self.rows as u32;
        let cond = cond.max(&Float::with_val(prec, 1));
        Float::with_val(prec, pow2(prec, -(prec as i32) + 24) * cond)
    }
}
