//! Cubic surfaces as twenty coefficients, text parsing and rendering, and
//! the JSON encodings shared by the library and the command-line tool.

pub mod json;
mod parser;

pub use parser::parse_expression;

use rug::Float;

use crate::multipoly::{Monomial, MultiPoly};
use crate::numerics::BigComplex;

/// Exponent vectors `(x, y, z, t)` of the coefficient slots, slot `k` at
/// index `k - 1`.
pub const THETA_MONOMIALS: [[u8; 4]; 20] = [
    [3, 0, 0, 0],
    [0, 3, 0, 0],
    [0, 0, 3, 0],
    [0, 0, 0, 3],
    [2, 1, 0, 0],
    [1, 2, 0, 0],
    [2, 0, 1, 0],
    [1, 0, 2, 0],
    [2, 0, 0, 1],
    [1, 0, 0, 2],
    [0, 2, 1, 0],
    [0, 1, 2, 0],
    [0, 2, 0, 1],
    [0, 1, 0, 2],
    [0, 0, 2, 1],
    [0, 0, 1, 2],
    [1, 1, 1, 0],
    [1, 1, 0, 1],
    [1, 0, 1, 1],
    [0, 1, 1, 1],
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CubicIoError {
    #[error("syntax error at column {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("not a homogeneous cubic: found monomial {monomial}")]
    NotHomogeneousDegree3 { monomial: String },
    #[error("the polynomial is identically zero")]
    ZeroPolynomial,
    #[error("expected 20 coefficients, found {0}")]
    ThetaLength(usize),
    #[error("invalid scalar {0:?}")]
    InvalidScalar(String),
    #[error("malformed JSON: {0}")]
    Json(String),
}

/// Slot index (0-based) of a degree-3 exponent vector.
pub fn theta_index(exps: &[u8; 4]) -> Option<usize> {
    THETA_MONOMIALS.iter().position(|m| m == exps)
}

/// A complex cubic surface `f = sum_k theta_k * m_k(x, y, z, t)`.
/// At least one coefficient is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicSurface {
    theta: [BigComplex; 20],
}

impl CubicSurface {
    pub fn from_theta(theta: [BigComplex; 20]) -> Result<Self, CubicIoError> {
        if theta.iter().all(BigComplex::is_zero) {
            return Err(CubicIoError::ZeroPolynomial);
        }
        Ok(CubicSurface { theta })
    }

    pub fn from_theta_vec(theta: Vec<BigComplex>) -> Result<Self, CubicIoError> {
        let n = theta.len();
        let arr: [BigComplex; 20] = theta.try_into().map_err(|_| CubicIoError::ThetaLength(n))?;
        Self::from_theta(arr)
    }

    /// Reads the coefficients of a quaternary polynomial, which must be a
    /// nonzero homogeneous cubic.
    pub fn from_poly(p: &MultiPoly) -> Result<Self, CubicIoError> {
        assert_eq!(p.arity(), 4, "surfaces live in four variables");
        if p.is_zero() {
            return Err(CubicIoError::ZeroPolynomial);
        }
        let prec = p.prec();
        let mut theta: [BigComplex; 20] = std::array::from_fn(|_| BigComplex::zero(prec));
        for (m, c) in p.terms() {
            match theta_index(m.exps()) {
                Some(k) => theta[k] = c.clone(),
                None => {
                    return Err(CubicIoError::NotHomogeneousDegree3 {
                        monomial: m.render(&["x", "y", "z", "t"]),
                    })
                }
            }
        }
        Self::from_theta(theta)
    }

    pub fn parse(text: &str, prec: u32) -> Result<Self, CubicIoError> {
        Self::from_poly(&parse_expression(text, prec)?)
    }

    pub fn theta(&self) -> &[BigComplex; 20] {
        &self.theta
    }

    /// Coefficient of slot `k`, `1 <= k <= 20`.
    pub fn slot(&self, k: usize) -> &BigComplex {
        &self.theta[k - 1]
    }

    pub fn prec(&self) -> u32 {
        self.theta.iter().map(BigComplex::prec).max().unwrap_or(64)
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        CubicSurface {
            theta: std::array::from_fn(|k| self.theta[k].with_prec(prec)),
        }
    }

    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::from_terms(
            4,
            self.prec(),
            THETA_MONOMIALS
                .iter()
                .zip(&self.theta)
                .map(|(e, c)| (Monomial::new(e), c.clone())),
        )
    }

    /// `max_k |theta_k|`.
    pub fn max_abs(&self) -> Float {
        crate::numerics::max_abs(&self.theta)
    }

    /// `sum_k |theta_k|`, an upper bound for `|f|` on the unit polydisc.
    pub fn sum_abs(&self) -> Float {
        let mut s = Float::with_val(self.prec(), 0);
        for c in &self.theta {
            s += c.abs();
        }
        s
    }

    pub fn render(&self) -> String {
        self.to_poly().render()
    }
}

impl std::fmt::Display for CubicSurface {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    #[test]
    fn slot_table_is_complete() {
        let mut seen = std::collections::BTreeSet::new();
        for e in THETA_MONOMIALS {
            assert_eq!(e.iter().map(|&v| v as u32).sum::<u32>(), 3);
            assert!(seen.insert(e));
        }
        assert_eq!(seen.len(), 20);
    }

    #[test]
    fn parse_fills_slots() {
        let s = CubicSurface::parse("x^3 + y^3 + z^3 + t^3", P).unwrap();
        for k in 1..=4 {
            assert_eq!(*s.slot(k), BigComplex::one(P));
        }
        let s = CubicSurface::parse("(3+2i)*x*y*z - 5*y*z*t", P).unwrap();
        assert_eq!(*s.slot(17), BigComplex::from_parts_i64(P, 3, 2));
        assert_eq!(*s.slot(20), BigComplex::from_i64(P, -5));
    }

    #[test]
    fn error_classes() {
        assert_eq!(
            CubicSurface::parse("x^2*y + x", P).unwrap_err(),
            CubicIoError::NotHomogeneousDegree3 { monomial: "x".into() }
        );
        assert_eq!(
            CubicSurface::parse("x^3 - x^3", P).unwrap_err(),
            CubicIoError::ZeroPolynomial
        );
        assert!(matches!(
            CubicSurface::parse("x^3 +", P),
            Err(CubicIoError::Syntax { position: 6, .. })
        ));
    }

    #[test]
    fn render_round_trip() {
        let s = CubicSurface::parse("x^3 + (2-3i)*x*y*z - z*t^2 - 2i*t^3 + 0.1*y^3", P).unwrap();
        let text = s.render();
        assert_eq!(CubicSurface::parse(&text, P).unwrap(), s);
        assert!(text.starts_with("x^3"));
    }
}
