//! Sparse multivariate polynomials over [`BigComplex`](crate::numerics::BigComplex).

mod linear;
mod poly;
mod resultant;

pub use linear::{linear_pivot, LinearChange};
pub use poly::{default_var_names, Monomial, MultiPoly, MAX_ARITY};
pub use resultant::{resultant_bivariate, sylvester_matrix};

use crate::numerics::NumericsError;

/// Determinant of the matrix of second partials of a ternary form.
pub fn hessian3(p: &MultiPoly) -> MultiPoly {
    assert_eq!(p.arity(), 3, "hessian3 expects a ternary form");
    let h: Vec<Vec<MultiPoly>> = (0..3)
        .map(|i| {
            let di = p.derivative(i);
            (0..3).map(|j| di.derivative(j)).collect()
        })
        .collect();
    let minor = |a: usize, b: usize, c: usize, d: usize| &(&h[1][a] * &h[2][b]) - &(&h[1][c] * &h[2][d]);
    let t0 = &h[0][0] * &minor(1, 2, 2, 1);
    let t1 = &h[0][1] * &minor(0, 2, 2, 0);
    let t2 = &h[0][2] * &minor(0, 1, 1, 0);
    &(&t0 - &t1) + &t2
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolyError {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("both polynomials are constant in the eliminated variable")]
    ConstantInEliminated,
    #[error("linear change is not invertible")]
    NotInvertible,
    #[error("division by the zero linear form")]
    ZeroDivisor,
    #[error("polynomial involves a variable outside the kept set")]
    VariableNotKept,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}
