use rug::Float;

use super::complex::{hard_zero_floor, pow2};
use super::NumericsError;

pub const DEFAULT_PRECISION_BITS: u32 = 256;
pub const MIN_PRECISION_BITS: u32 = 64;
pub const MAX_PRECISION_BITS: u32 = 4096;

/// Working precision plus the two thresholds every numerical decision uses.
///
/// `zero_eps` decides whether a quantity counts as zero when classifying;
/// `cert_eps` is the acceptance bound for residual certificates. Both are
/// relative to the scale of whatever is being tested.
#[derive(Clone, Debug, PartialEq)]
pub struct TolerancePolicy {
    pub precision_bits: u32,
    pub zero_eps: Float,
    pub cert_eps: Float,
}

impl TolerancePolicy {
    /// Defaults: `zero_eps = 2^(-3P/4)`, `cert_eps = 2^(-P/2)`.
    pub fn new(precision_bits: u32) -> Result<Self, NumericsError> {
        if !(MIN_PRECISION_BITS..=MAX_PRECISION_BITS).contains(&precision_bits) {
            return Err(NumericsError::InvalidPrecision(precision_bits));
        }
        let p = precision_bits as i32;
        Ok(TolerancePolicy {
            precision_bits,
            zero_eps: pow2(precision_bits, -(3 * p) / 4),
            cert_eps: pow2(precision_bits, -p / 2),
        })
    }

    pub fn with_cert_eps(mut self, cert_eps: Float) -> Result<Self, NumericsError> {
        let floor = self.hard_floor();
        if !cert_eps.is_finite() || cert_eps < floor {
            return Err(NumericsError::InvalidTolerance(format!(
                "cert_eps {} is below the hard floor 2^({})",
                cert_eps.to_f64(),
                -(self.precision_bits as i64) + 16
            )));
        }
        if self.zero_eps > cert_eps {
            self.zero_eps = cert_eps.clone();
        }
        self.cert_eps = Float::with_val(self.precision_bits, cert_eps);
        Ok(self)
    }

    /// Same thresholds policy at a different precision.
    pub fn rescaled(&self, precision_bits: u32) -> Result<Self, NumericsError> {
        Self::new(precision_bits)
    }

    pub fn prec(&self) -> u32 {
        self.precision_bits
    }

    pub fn hard_floor(&self) -> Float {
        hard_zero_floor(self.precision_bits)
    }

    /// `cert_eps * scale`.
    pub fn cert_bound(&self, scale: &Float) -> Float {
        Float::with_val(self.precision_bits, &self.cert_eps * scale)
    }

    /// `zero_eps * scale`.
    pub fn zero_bound(&self, scale: &Float) -> Float {
        Float::with_val(self.precision_bits, &self.zero_eps * scale)
    }

    pub fn is_negligible(&self, value: &Float, scale: &Float) -> bool {
        *value <= self.zero_bound(scale)
    }
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self::new(DEFAULT_PRECISION_BITS).expect("default precision is in range")
    }
}
