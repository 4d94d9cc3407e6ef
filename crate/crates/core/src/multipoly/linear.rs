use rug::ops::Pow;
use rug::Float;

use super::{Monomial, MultiPoly, PolyError};
use crate::numerics::{BigComplex, Matrix, TolerancePolicy};

/// Invertible linear change of variables acting on row vectors:
/// `(x_1..x_n) -> (x_1..x_n) * A`, so `p ∘ A` means `w -> p(w A)`.
///
/// Composition follows the row convention: `(p ∘ A) ∘ B = p ∘ (B A)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearChange {
    matrix: Matrix,
    inverse: Matrix,
}

impl LinearChange {
    pub fn new(matrix: Matrix, tol: &TolerancePolicy) -> Result<Self, PolyError> {
        if !matrix.is_square() {
            return Err(PolyError::NotInvertible);
        }
        let n = matrix.rows() as u32;
        let scale = matrix.max_abs();
        let det_scale = Float::with_val(tol.prec(), scale.pow(n));
        if matrix.det().abs() <= tol.zero_bound(&det_scale) {
            return Err(PolyError::NotInvertible);
        }
        let inverse = matrix.inverse().map_err(|_| PolyError::NotInvertible)?;
        if matrix.inverse_check(&inverse) > matrix.inverse_tolerance(&inverse) {
            return Err(PolyError::NotInvertible);
        }
        Ok(LinearChange { matrix, inverse })
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        LinearChange {
            matrix: Matrix::identity(n, prec),
            inverse: Matrix::identity(n, prec),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &Matrix {
        &self.inverse
    }

    pub fn inverse(&self) -> LinearChange {
        LinearChange {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
        }
    }

    /// `self * rhs` as matrices, i.e. the change applying `self` after `rhs`
    /// in substitution order: `p ∘ (self * rhs) = (p ∘ rhs) ∘ self`.
    pub fn product(&self, rhs: &LinearChange) -> LinearChange {
        LinearChange {
            matrix: self.matrix.mul(&rhs.matrix),
            inverse: rhs.inverse.mul(&self.inverse),
        }
    }

    pub fn det(&self) -> BigComplex {
        self.matrix.det()
    }
}

/// Index of the largest-magnitude coefficient (the last one on ties); the
/// variable [`MultiPoly::div_linear`] eliminates.
pub fn linear_pivot(form: &[BigComplex]) -> usize {
    (0..form.len())
        .max_by(|&a, &b| form[a].abs().partial_cmp(&form[b].abs()).unwrap())
        .expect("nonempty form")
}

impl MultiPoly {
    /// `p ∘ A`: every variable `x_j` is replaced by `sum_i x_i A[i][j]`.
    pub fn substitute_linear(&self, change: &LinearChange) -> Result<MultiPoly, PolyError> {
        let n = change.dim();
        if n != self.arity() {
            return Err(PolyError::ArityMismatch {
                expected: self.arity(),
                found: n,
            });
        }
        let a = change.matrix();
        let images: Vec<MultiPoly> = (0..n)
            .map(|j| {
                let col: Vec<BigComplex> = (0..n).map(|i| a.get(i, j).clone()).collect();
                MultiPoly::linear(&col)
            })
            .collect();
        self.compose(&images)
    }

    /// Division by the linear form `sum form[i] * var_i`, pivoting on the
    /// variable with the largest coefficient. Returns `(quotient, remainder)`
    /// where the remainder does not involve the pivot variable.
    pub fn div_linear(&self, form: &[BigComplex]) -> Result<(MultiPoly, MultiPoly), PolyError> {
        if form.len() != self.arity() {
            return Err(PolyError::ArityMismatch {
                expected: self.arity(),
                found: form.len(),
            });
        }
        let k = linear_pivot(form);
        let lead = &form[k];
        if lead.is_zero() {
            return Err(PolyError::ZeroDivisor);
        }
        let inv = lead.recip()?;
        let monic: Vec<BigComplex> = form.iter().map(|c| c * &inv).collect();
        let prec = self.prec();
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.arity(), prec);
        loop {
            let next = rem
                .terms()
                .filter(|(m, _)| m.exp(k) > 0)
                .max_by_key(|(m, _)| m.exp(k))
                .map(|(m, c)| (*m, c.clone()));
            let Some((m, c)) = next else { break };
            let reduced = m.with_exp(k, m.exp(k) - 1);
            quot.add_term(reduced, &c);
            rem.add_term(m, &-&c);
            for (j, cj) in monic.iter().enumerate() {
                if j != k && !cj.is_zero() {
                    rem.add_term(reduced.mul(&Monomial::var(j)), &-(&c * cj));
                }
            }
        }
        Ok((quot.scale(&inv), rem))
    }
}
