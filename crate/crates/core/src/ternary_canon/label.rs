use rug::Float;

use crate::numerics::{BigComplex, TolerancePolicy};

const IRREDUCIBLE_FORMS: [&str; 5] = [
    "x^3 + alpha*x*z^2 + z^3 - t^2*z",
    "x^3 + x*z^2 - t^2*z",
    "x^3 + z^3 - t^2*z",
    "x^3 - t^2*z",
    "x^3 + x^2*z - t^2*z",
];

const REDUCIBLE_FORMS: [&str; 6] = [
    "z*(x^2 + t*z)",
    "z*(x^2 + t^2 + z^2)",
    "x*t*z",
    "x*t*(x + t)",
    "x^2*t",
    "x^3",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Irreducible plane cubics.
    I,
    /// Reducible plane cubics.
    II,
}

/// Position of a plane cubic in the two lists of normal forms. `variant`
/// counts from 1 in list order; `alpha` is set only for the one-parameter
/// family. `ambiguous` marks a decision taken within the borderline band.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonLabel {
    pub family: Family,
    pub variant: u8,
    pub alpha: Option<BigComplex>,
    pub ambiguous: bool,
}

impl CanonLabel {
    pub fn irreducible(variant: u8, alpha: Option<BigComplex>, ambiguous: bool) -> Self {
        assert!((1..=5).contains(&variant));
        CanonLabel {
            family: Family::I,
            variant,
            alpha,
            ambiguous,
        }
    }

    pub fn reducible(variant: u8, ambiguous: bool) -> Self {
        assert!((1..=6).contains(&variant));
        CanonLabel {
            family: Family::II,
            variant,
            alpha: None,
            ambiguous,
        }
    }

    /// Short name such as `I3` or `II5`.
    pub fn name(&self) -> String {
        match self.family {
            Family::I => format!("I{}", self.variant),
            Family::II => format!("II{}", self.variant),
        }
    }

    /// The normal form this label stands for.
    pub fn form(&self) -> &'static str {
        let i = self.variant as usize - 1;
        match self.family {
            Family::I => IRREDUCIBLE_FORMS[i],
            Family::II => REDUCIBLE_FORMS[i],
        }
    }
}

/// `(is_zero, ambiguous)` for a magnitude measured against `scale`.
/// Zero means at most `cert_eps * scale`; the decision is flagged when the
/// value sits between `zero_eps * scale` and `sqrt(cert_eps) * scale`.
pub(crate) fn near_zero(tol: &TolerancePolicy, value: &Float, scale: &Float) -> (bool, bool) {
    let prec = tol.prec();
    let is_zero = *value <= tol.cert_bound(scale);
    let upper = Float::with_val(prec, tol.cert_eps.clone().sqrt() * scale);
    let ambiguous = *value > tol.zero_bound(scale) && *value <= upper;
    (is_zero, ambiguous)
}

/// Label of `x^3 + l8 x z^2 + l3 z^3 - t^2 z + l7 x^2 z`.
///
/// Completing the cube (`x -> x - l7 z / 3`) gives `x^3 + a x z^2 + b z^3
/// - t^2 z`; the curve is singular exactly when `4a^3 + 27b^2 = 0`, and in
/// the generic case `alpha = a * b^(-2/3)`.
pub fn label_from_lambdas(
    lam3: &BigComplex,
    lam7: &BigComplex,
    lam8: &BigComplex,
    tol: &TolerancePolicy,
) -> CanonLabel {
    let prec = tol.prec();
    let third = BigComplex::from_ratio(prec, 1, 3);
    let l7sq = lam7 * lam7;
    let a = lam8 - &(&l7sq * &third);
    let b = &(lam3 - &(&(lam7 * lam8) * &third)) + &(&(&l7sq * lam7) * &BigComplex::from_ratio(prec, 2, 27));
    let one = Float::with_val(prec, 1);
    let ab_scale = one.clone().max(&a.abs()).max(&b.abs());
    let (a_zero, amb_a) = near_zero(tol, &a.abs(), &ab_scale);
    let (b_zero, amb_b) = near_zero(tol, &b.abs(), &ab_scale);
    let a3 = &(&a * &a) * &a;
    let b2 = &b * &b;
    let disc = &a3.scale_i64(4) + &b2.scale_i64(27);
    let d_scale = one
        .max(&Float::with_val(prec, a3.abs() * 4u32))
        .max(&Float::with_val(prec, b2.abs() * 27u32));
    let (d_zero, amb_d) = near_zero(tol, &disc.abs(), &d_scale);
    if a_zero && b_zero {
        return CanonLabel::irreducible(4, None, amb_a || amb_b);
    }
    if d_zero {
        return CanonLabel::irreducible(5, None, amb_d);
    }
    if a_zero {
        return CanonLabel::irreducible(3, None, amb_a || amb_d);
    }
    if b_zero {
        return CanonLabel::irreducible(2, None, amb_b || amb_d);
    }
    let mu = b.cbrt().recip().expect("b is nonzero");
    let alpha = &a * &(&mu * &mu);
    CanonLabel::irreducible(1, Some(alpha), amb_a || amb_b || amb_d)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn label(l3: i64, l7: i64, l8: i64) -> CanonLabel {
        label_from_lambdas(
            &BigComplex::from_i64(P, l3),
            &BigComplex::from_i64(P, l7),
            &BigComplex::from_i64(P, l8),
            &TolerancePolicy::default(),
        )
    }

    #[test]
    fn the_five_irreducible_forms() {
        let l = label(1, 0, 1);
        assert_eq!(l.name(), "I1");
        assert!((l.alpha.unwrap().abs_f64() - 1.0).abs() < 1e-60);
        assert_eq!(label(0, 0, 1).name(), "I2");
        assert_eq!(label(1, 0, 0).name(), "I3");
        assert_eq!(label(0, 0, 0).name(), "I4");
        assert_eq!(label(0, 1, 0).name(), "I5");
        assert!(!label(0, 1, 0).ambiguous);
    }

    #[test]
    fn singular_member_of_the_family_is_nodal() {
        // a = -3, b = 2: 4(-27) + 27*4 = 0, i.e. alpha^3 = -27/4
        assert_eq!(label(2, 0, -3).name(), "I5");
    }

    #[test]
    fn reducible_names_and_forms() {
        let l = CanonLabel::reducible(3, false);
        assert_eq!(l.name(), "II3");
        assert_eq!(l.form(), "x*t*z");
    }
}
