//! High-precision complex scalars, tolerance policy, dense matrices and
//! univariate root finding.

mod complex;
mod matrix;
mod roots;
mod tolerance;

pub use complex::{float_to_decimal, hard_zero_floor, pow2, BigComplex};
pub use matrix::Matrix;
pub use roots::{
    cluster_roots, eval_univariate, horner, max_abs, roots_univariate, roots_univariate_with,
    trim_leading, RootCluster, DEFAULT_MAX_ITERATIONS,
};
pub use tolerance::{
    TolerancePolicy, DEFAULT_PRECISION_BITS, MAX_PRECISION_BITS, MIN_PRECISION_BITS,
};

/// Principal square root; see [`BigComplex::sqrt`].
pub fn principal_sqrt(v: &BigComplex) -> BigComplex {
    v.sqrt()
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("division by a value below the hard-zero floor")]
    DivisionByZero,
    #[error("leading coefficient vanishes; deflate before root finding")]
    LeadingZero,
    #[error("polynomial has degree zero")]
    DegreeZero,
    #[error("root iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("singular matrix")]
    Singular,
    #[error("invalid numeric literal {0:?}")]
    InvalidLiteral(String),
    #[error("precision {0} bits is outside [64, 4096]")]
    InvalidPrecision(u32),
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
}
