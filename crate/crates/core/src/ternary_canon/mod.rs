//! Plane cubics obtained as the `y = 0` section of a surface: line search,
//! flexes, reduction to the canonical shape, and normal-form labels.
//!
//! Ternary polynomials use the variable order `(x, z, t)`.

mod flex;
mod label;
mod lines;
mod solve;
mod weierstrass;

pub use flex::{find_flex, flex_candidates, FlexPoint};
pub use label::{label_from_lambdas, CanonLabel, Family};
pub use lines::{classify_reducible, find_lines, LineSearch, ProjectiveLine};
pub use weierstrass::{canonical_form, weierstrass_reduce, CanonicalTernary};

use crate::cubic_io::CubicSurface;
use crate::multipoly::{MultiPoly, PolyError};
use crate::numerics::NumericsError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TernaryError {
    #[error("no nonsingular flex found")]
    NoFlexFound,
    #[error("tangent coefficient vanished at every flex tried")]
    DegenerateTangent,
    #[error("canonical residual {residual:e} exceeds the certification bound")]
    CertificationFailed { residual: f64 },
    #[error("the slice is identically zero")]
    ZeroSlice,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl From<NumericsError> for TernaryError {
    fn from(e: NumericsError) -> Self {
        TernaryError::Poly(PolyError::Numerics(e))
    }
}

/// The section `f(x, 0, z, t)` as a polynomial in `(x, z, t)`; zero when
/// `y` divides `f`.
pub fn slice_y0(c: &CubicSurface) -> MultiPoly {
    c.to_poly()
        .restrict_zero(1)
        .project_vars(&[0, 2, 3])
        .expect("y was removed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::BigComplex;

    const P: u32 = 256;

    #[test]
    fn slice_drops_y_terms() {
        let s = slice_y0(&CubicSurface::parse("x^3 + y^3", P).unwrap());
        assert_eq!(s.render(), "x^3");
        let s = slice_y0(&CubicSurface::parse("y*(x^2 + t*z)", P).unwrap());
        assert!(s.is_zero());
    }

    #[test]
    fn slice_keeps_zt2_slot() {
        let mut theta: [BigComplex; 20] = std::array::from_fn(|_| BigComplex::zero(P));
        theta[0] = BigComplex::one(P);
        theta[15] = BigComplex::from_i64(P, -1);
        let s = slice_y0(&CubicSurface::from_theta(theta).unwrap());
        assert_eq!(s.render(), "x^3 - z*t^2");
    }
}
