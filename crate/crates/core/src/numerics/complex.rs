use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use super::NumericsError;

/// A complex number with MPFR real and imaginary parts.
///
/// Binary operations run at the larger of the two operand precisions.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex(Complex);

impl BigComplex {
    pub fn zero(prec: u32) -> Self {
        BigComplex(Complex::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(prec, 1)
    }

    /// The imaginary unit.
    pub fn i(prec: u32) -> Self {
        Self::from_parts_i64(prec, 0, 1)
    }

    pub fn from_i64(prec: u32, re: i64) -> Self {
        BigComplex(Complex::with_val(prec, (re, 0)))
    }

    pub fn from_parts_i64(prec: u32, re: i64, im: i64) -> Self {
        BigComplex(Complex::with_val(prec, (re, im)))
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        BigComplex(Complex::with_val(prec, (re, im)))
    }

    pub fn from_floats(re: Float, im: Float) -> Self {
        let prec = re.prec().max(im.prec());
        BigComplex(Complex::with_val(prec, (re, im)))
    }

    /// Exact rational `num / den`, rounded once.
    pub fn from_ratio(prec: u32, num: i64, den: i64) -> Self {
        let mut re = Float::with_val(prec, num);
        re /= den;
        BigComplex(Complex::with_val(prec, (re, 0)))
    }

    /// Parses decimal strings for the real and imaginary parts (MPFR syntax,
    /// e.g. `-1.25e-3`), correctly rounded to `prec` bits.
    pub fn parse_parts(prec: u32, re: &str, im: &str) -> Result<Self, NumericsError> {
        let parse = |s: &str| {
            Float::parse(s.trim())
                .map(|p| Float::with_val(prec, p))
                .map_err(|_| NumericsError::InvalidLiteral(s.to_string()))
        };
        Ok(Self::from_floats(parse(re)?, parse(im)?))
    }

    pub fn inner(&self) -> &Complex {
        &self.0
    }

    pub fn re(&self) -> &Float {
        self.0.real()
    }

    pub fn im(&self) -> &Float {
        self.0.imag()
    }

    pub fn prec(&self) -> u32 {
        self.0.prec().0.max(self.0.prec().1)
    }

    /// Same value rounded (or widened) to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        BigComplex(Complex::with_val(prec, &self.0))
    }

    pub fn is_zero(&self) -> bool {
        self.0.real().is_zero() && self.0.imag().is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.real().is_finite() && self.0.imag().is_finite()
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.0.abs_ref())
    }

    pub fn norm_sqr(&self) -> Float {
        Float::with_val(self.prec(), self.0.norm_ref())
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn conj(&self) -> Self {
        BigComplex(Complex::with_val(self.prec(), self.0.conj_ref()))
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        BigComplex(Complex::with_val(self.prec(), &self.0 * k))
    }

    pub fn mul_float(&self, k: &Float) -> Self {
        BigComplex(Complex::with_val(self.prec(), &self.0 * k))
    }

    /// Principal square root: non-negative real part, and non-negative
    /// imaginary part when the real part is zero.
    pub fn sqrt(&self) -> Self {
        let mut r = Complex::with_val(self.prec(), self.0.sqrt_ref());
        let flip = match r.real().cmp0() {
            Some(Ordering::Less) => true,
            Some(Ordering::Equal) => r.imag().is_sign_negative() && !r.imag().is_zero(),
            _ => false,
        };
        if flip {
            r = -r;
        }
        BigComplex(r).canonical_zeros()
    }

    /// Principal cube root, `exp(log(z)/3)`; zero maps to zero.
    pub fn cbrt(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let prec = self.prec();
        let mut l = Complex::with_val(prec, self.0.ln_ref());
        l /= 3;
        BigComplex(Complex::with_val(prec, l.exp_ref()))
    }

    pub fn pow_u32(&self, k: u32) -> Self {
        BigComplex(Complex::with_val(self.prec(), (&self.0).pow(k)))
    }

    /// `exp(2πi·k/n)`.
    pub fn root_of_unity(prec: u32, k: i64, n: i64) -> Self {
        let mut angle = Float::with_val(prec, Constant::Pi);
        angle *= 2 * k;
        angle /= n;
        let (s, c) = angle.sin_cos(Float::new(prec));
        Self::from_floats(c, s)
    }

    /// Division; fails when `|rhs|` is below the hard-zero floor
    /// `2^(-P+16)` at the working precision `P`.
    pub fn try_div(&self, rhs: &BigComplex) -> Result<Self, NumericsError> {
        let prec = self.prec().max(rhs.prec());
        if rhs.abs() <= hard_zero_floor(prec) {
            return Err(NumericsError::DivisionByZero);
        }
        Ok(BigComplex(Complex::with_val(prec, &self.0 / &rhs.0)))
    }

    pub fn recip(&self) -> Result<Self, NumericsError> {
        Self::one(self.prec()).try_div(self)
    }

    /// Replaces negative zeros by positive zeros so rendering is stable.
    pub fn canonical_zeros(mut self) -> Self {
        let prec = self.prec();
        if self.0.real().is_zero() {
            *self.0.mut_real() = Float::with_val(prec, 0);
        }
        if self.0.imag().is_zero() {
            *self.0.mut_imag() = Float::with_val(prec, 0);
        }
        self
    }

    /// Full-precision decimal strings for the real and imaginary parts.
    pub fn to_decimal_parts(&self) -> (String, String) {
        (float_to_decimal(self.re()), float_to_decimal(self.im()))
    }

    pub fn to_f64_parts(&self) -> (f64, f64) {
        (self.re().to_f64(), self.im().to_f64())
    }

    /// Lexicographic key on (|re|, |im|) used for deterministic tie-breaks.
    pub fn magnitude_lex_cmp(&self, other: &BigComplex) -> Ordering {
        let a = (self.re().clone().abs(), self.im().clone().abs());
        let b = (other.re().clone().abs(), other.im().clone().abs());
        a.0.partial_cmp(&b.0)
            .unwrap_or(Ordering::Equal)
            .then(a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
    }
}

/// `2^(-P+16)`.
pub fn hard_zero_floor(prec: u32) -> Float {
    pow2(prec, -(prec as i32) + 16)
}

pub fn pow2(prec: u32, exp: i32) -> Float {
    let mut f = Float::with_val(prec.max(64), 1);
    f <<= exp;
    f
}

/// Decimal rendering that reads back to the identical binary value.
/// Small integers are written without a fractional part.
pub fn float_to_decimal(f: &Float) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    if f.is_integer() && f.clone().abs() < pow2(64, 53) {
        if let Some(i) = f.to_integer() {
            return i.to_string();
        }
    }
    f.to_string_radix(10, None)
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a> $trait<&'a BigComplex> for &'a BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: &'a BigComplex) -> BigComplex {
                let prec = self.prec().max(rhs.prec());
                BigComplex(Complex::with_val(prec, &self.0 $op &rhs.0))
            }
        }
        impl $trait<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: BigComplex) -> BigComplex {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: &'a BigComplex) -> BigComplex {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<BigComplex> for &'a BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: BigComplex) -> BigComplex {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl AddAssign<&BigComplex> for BigComplex {
    fn add_assign(&mut self, rhs: &BigComplex) {
        if rhs.prec() > self.prec() {
            *self = &*self + rhs;
        } else {
            self.0 += &rhs.0;
        }
    }
}

impl SubAssign<&BigComplex> for BigComplex {
    fn sub_assign(&mut self, rhs: &BigComplex) {
        if rhs.prec() > self.prec() {
            *self = &*self - rhs;
        } else {
            self.0 -= &rhs.0;
        }
    }
}

impl MulAssign<&BigComplex> for BigComplex {
    fn mul_assign(&mut self, rhs: &BigComplex) {
        if rhs.prec() > self.prec() {
            *self = &*self * rhs;
        } else {
            self.0 *= &rhs.0;
        }
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex(-self.0)
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex(Complex::with_val(self.prec(), -&self.0))
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64_parts();
        if im == 0.0 {
            write!(f, "{re}")
        } else if re == 0.0 {
            write!(f, "{im}i")
        } else if im < 0.0 {
            write!(f, "({re}-{}i)", -im)
        } else {
            write!(f, "({re}+{im}i)")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn close(a: &BigComplex, b: &BigComplex, eps: f64) -> bool {
        (a - b).abs_f64() <= eps
    }

    #[test]
    fn sqrt_exact_square() {
        assert_eq!(BigComplex::from_i64(P, 4).sqrt(), BigComplex::from_i64(P, 2));
    }

    #[test]
    fn sqrt_negative_real_is_positive_imaginary() {
        let r = BigComplex::from_i64(P, -4).sqrt();
        assert_eq!(r, BigComplex::from_parts_i64(P, 0, 2));
        // negative zero imaginary part must not flip the branch
        let v = BigComplex::from_f64(P, -4.0, -0.0);
        assert_eq!(v.sqrt(), BigComplex::from_parts_i64(P, 0, 2));
    }

    #[test]
    fn sqrt_of_minus_seven_quarters() {
        let v = BigComplex::from_ratio(P, 9, 4) - BigComplex::from_i64(P, 4);
        let r = v.sqrt();
        assert!(r.re().is_zero());
        assert!((r.im().to_f64() - 7f64.sqrt() / 2.0).abs() < 1e-15);
        let sq = &r * &r;
        assert!((&sq - &v).abs() < pow2(P, -232));
    }

    #[test]
    fn cbrt_cubes_back() {
        let v = BigComplex::from_parts_i64(P, -3, 5);
        let c = v.cbrt();
        assert!(close(&c.pow_u32(3), &v, 1e-70));
    }

    #[test]
    fn division_by_hard_zero_fails() {
        let one = BigComplex::one(P);
        let tiny = BigComplex(Complex::with_val(P, (pow2(P, -250), 0)));
        assert!(matches!(one.try_div(&tiny), Err(NumericsError::DivisionByZero)));
        assert!(one.try_div(&BigComplex::from_i64(P, 3)).is_ok());
    }

    #[test]
    fn decimal_round_trip_is_exact() {
        let v = BigComplex::from_ratio(P, 1, 3);
        let (re, im) = v.to_decimal_parts();
        let back = BigComplex::parse_parts(P, &re, &im).unwrap();
        assert_eq!(back, v);
        assert_eq!(float_to_decimal(&Float::with_val(P, -7)), "-7");
        assert_eq!(im, "0");
    }

    #[test]
    fn mixed_precision_widens() {
        let a = BigComplex::from_i64(128, 1);
        let b = BigComplex::from_i64(512, 1);
        assert_eq!((&a + &b).prec(), 512);
    }
}
