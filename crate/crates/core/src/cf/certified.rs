//! Fixed-point reals with an explicit error radius.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::phase::Phase;

/// A real number `mantissa * 2^-bits` known to lie within
/// `radius * 2^-bits` of the true value.
#[derive(Clone, PartialEq, Eq)]
pub struct CertifiedReal {
    mantissa: BigInt,
    radius: BigUint,
    bits: u32,
}

/// Converts `m * 2^-bits` to the nearest-ish `f64` without overflowing on
/// huge mantissas.
pub(crate) fn scaled_to_f64(m: &BigInt, bits: u32) -> f64 {
    if m.is_zero() {
        return 0.0;
    }
    let len = m.bits() as i64;
    let shift = (len - 64).max(0);
    let top = (m.abs() >> shift as usize).to_u64().unwrap_or(u64::MAX) as f64;
    let v = top * 2f64.powi((shift - bits as i64) as i32);
    if m.sign() == Sign::Minus {
        -v
    } else {
        v
    }
}

impl CertifiedReal {
    pub fn new(mantissa: BigInt, radius: BigUint, bits: u32) -> Self {
        CertifiedReal {
            mantissa,
            radius,
            bits,
        }
    }

    /// Exact value `n` (no radius).
    pub fn from_integer(n: i64, bits: u32) -> Self {
        CertifiedReal::new(BigInt::from(n) << bits, BigUint::zero(), bits)
    }

    /// `x` is taken as exact; only its dyadic value is stored.
    pub fn from_f64(x: f64, bits: u32) -> Self {
        assert!(x.is_finite(), "finite input required");
        let (mant, exp, sign) = num_traits::float::FloatCore::integer_decode(x);
        let mut m = BigInt::from(mant);
        let shift = exp as i64 + bits as i64;
        let mut radius = BigUint::zero();
        if shift >= 0 {
            m <<= shift as usize;
        } else {
            let s = (-shift) as usize;
            if !(m.clone() % (BigInt::one() << s)).is_zero() {
                radius = BigUint::one();
            }
            m >>= s;
        }
        if sign < 0 {
            m = -m;
        }
        CertifiedReal::new(m, radius, bits)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn radius_ulps(&self) -> &BigUint {
        &self.radius
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn to_f64(&self) -> f64 {
        scaled_to_f64(&self.mantissa, self.bits)
    }

    /// Absolute error radius as an `f64` (rounded up slightly).
    pub fn radius(&self) -> f64 {
        scaled_to_f64(&BigInt::from(self.radius.clone()), self.bits) * (1.0 + 1e-15)
    }

    /// Fractional part in `[0, 1)`. The radius is unchanged; a value whose
    /// interval contains an integer has an ambiguous fractional part, which
    /// callers detect with [`CertifiedReal::straddles_integer`].
    pub fn frac(&self) -> CertifiedReal {
        let one = BigInt::one() << self.bits;
        CertifiedReal::new(
            self.mantissa.mod_floor(&one),
            self.radius.clone(),
            self.bits,
        )
    }

    pub fn straddles_integer(&self) -> bool {
        let one = BigInt::one() << self.bits;
        let f = self.mantissa.mod_floor(&one);
        let r = BigInt::from(self.radius.clone());
        f < r || &one - &f <= r
    }

    /// `min({x}, 1 - {x})`, i.e. the distance to the nearest integer.
    pub fn dist_to_nearest_int(&self) -> CertifiedReal {
        let one = BigInt::one() << self.bits;
        let f = self.mantissa.mod_floor(&one);
        let g = &one - &f;
        let m = if f <= g { f } else { g };
        CertifiedReal::new(m, self.radius.clone(), self.bits)
    }

    /// Integer multiple; both the value and the radius scale by `|k|`.
    pub fn mul_int(&self, k: &BigInt) -> CertifiedReal {
        let r = &self.radius * k.magnitude();
        CertifiedReal::new(&self.mantissa * k, r, self.bits)
    }

    pub fn add(&self, other: &CertifiedReal) -> CertifiedReal {
        assert_eq!(self.bits, other.bits, "precision mismatch");
        CertifiedReal::new(
            &self.mantissa + &other.mantissa,
            &self.radius + &other.radius,
            self.bits,
        )
    }

    pub fn sub(&self, other: &CertifiedReal) -> CertifiedReal {
        assert_eq!(self.bits, other.bits, "precision mismatch");
        CertifiedReal::new(
            &self.mantissa - &other.mantissa,
            &self.radius + &other.radius,
            self.bits,
        )
    }

    pub fn abs(&self) -> CertifiedReal {
        CertifiedReal::new(self.mantissa.abs(), self.radius.clone(), self.bits)
    }

    /// Sign of the value, or `None` when the interval contains zero.
    pub fn certified_sign(&self) -> Option<Ordering> {
        let r = BigInt::from(self.radius.clone());
        if self.mantissa > r {
            Some(Ordering::Greater)
        } else if self.mantissa < -r {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Certified comparison with an exactly representable threshold.
    pub fn cmp_threshold(&self, threshold: f64) -> Result<Ordering> {
        let t = CertifiedReal::from_f64(threshold, self.bits);
        let diff = CertifiedReal::new(
            &self.mantissa - &t.mantissa,
            &self.radius + &t.radius,
            self.bits,
        );
        diff.certified_sign().ok_or(Error::ThresholdStraddle {
            threshold,
            radius: self.radius(),
        })
    }

    /// Fails unless the radius is below `2^-tol_bits`.
    pub fn require_radius_below(&self, tol_bits: u32) -> Result<()> {
        if tol_bits >= self.bits || self.radius >= (BigUint::one() << (self.bits - tol_bits)) {
            return Err(Error::PrecisionExhausted {
                radius: self.radius(),
                tolerance: 2f64.powi(-(tol_bits as i32)),
            });
        }
        Ok(())
    }

    /// Truncates the fractional part into a circle phase.
    pub fn to_phase(&self) -> Phase {
        let one = BigInt::one() << self.bits;
        let f = self.mantissa.mod_floor(&one);
        Phase::from_fixed(f.magnitude(), self.bits)
    }
}

impl fmt::Debug for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17e} ± {:.3e}", self.to_f64(), self.radius())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_to_nearest_integer_examples() {
        for (x, want) in [(0.25, 0.25), (0.75, 0.25), (3.2, 0.2), (-0.1, 0.1)] {
            let c = CertifiedReal::from_f64(x, 128).dist_to_nearest_int();
            assert!((c.to_f64() - want).abs() < 1e-15, "{x}");
            assert!(c.radius() < 1e-30);
        }
    }

    #[test]
    fn threshold_comparison_detects_straddle() {
        let x = CertifiedReal::new(BigInt::from(126), BigUint::from(10u32), 8);
        assert!(x.cmp_threshold(0.5).is_err());
        assert_eq!(x.cmp_threshold(0.25).unwrap(), Ordering::Greater);
        assert_eq!(x.cmp_threshold(0.75).unwrap(), Ordering::Less);
    }

    #[test]
    fn radius_budget() {
        let x = CertifiedReal::new(BigInt::from(1), BigUint::from(1u32) << 70u32, 128);
        // radius is 2^-58
        assert!(x.require_radius_below(50).is_ok());
        assert!(x.require_radius_below(58).is_err());
        assert!(x.require_radius_below(64).is_err());
    }
}
