//! Points of the circle `R/Z` as 128-bit fixed-point fractions.
//!
//! A [`Phase`] stores `floor(x * 2^128)` for `x` in `[0, 1)`. Addition wraps,
//! which is exactly reduction modulo 1, and multiplication by an integer is a
//! wrapping multiply, so `k * alpha mod 1` costs one `u128` multiplication and
//! its error is `k` times the rounding error of `alpha`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

/// Size of one unit in the last place, `2^-128`.
pub const ULP: f64 = 1.0 / 340282366920938463463374607431768211456.0;

/// Distance below which two breakpoints are treated as the same point.
pub const MERGE_TOLERANCE: u128 = 1u128 << 64;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Phase(pub u128);

impl Phase {
    pub const ZERO: Phase = Phase(0);
    pub const HALF: Phase = Phase(1u128 << 127);

    /// Rounds `x mod 1` to the nearest representable phase.
    pub fn from_f64(x: f64) -> Phase {
        let frac = x - x.floor();
        if frac == 0.0 {
            return Phase::ZERO;
        }
        // frac has at most 53 significant bits; scale exactly by splitting
        // into two 64-bit halves.
        let hi = (frac * 18446744073709551616.0).floor();
        let lo = ((frac * 18446744073709551616.0 - hi) * 18446744073709551616.0).round();
        let hi = hi as u128;
        let lo = lo as u128;
        Phase((hi << 64).wrapping_add(lo))
    }

    /// `num/den mod 1`, rounded down. `den` must be positive.
    pub fn from_ratio(num: i128, den: u128) -> Phase {
        assert!(den > 0, "denominator must be positive");
        let r = num.rem_euclid(den as i128) as u128;
        // floor(r * 2^128 / den) by long division in two 64-bit steps.
        let big = (BigUint::from(r) << 128u32) / BigUint::from(den);
        Phase(big.to_u128().unwrap_or(u128::MAX))
    }

    /// Truncates a fixed-point value with `bits` fractional bits.
    pub fn from_fixed(mantissa: &BigUint, bits: u32) -> Phase {
        let mask = (BigUint::from(1u8) << bits) - 1u8;
        let frac = mantissa & mask;
        let v = if bits >= 128 {
            frac >> (bits - 128)
        } else {
            frac << (128 - bits)
        };
        Phase(v.to_u128().unwrap_or(0))
    }

    pub fn to_f64(self) -> f64 {
        let hi = (self.0 >> 64) as u64 as f64;
        let lo = (self.0 as u64) as f64;
        (hi + lo / 18446744073709551616.0) / 18446744073709551616.0
    }

    /// `k * self mod 1`.
    pub fn mul_int(self, k: u128) -> Phase {
        Phase(self.0.wrapping_mul(k))
    }

    /// Signed multiple; `k` may be negative.
    pub fn mul_i128(self, k: i128) -> Phase {
        if k >= 0 {
            self.mul_int(k as u128)
        } else {
            -self.mul_int(k.unsigned_abs())
        }
    }

    /// Distance to the nearest integer, `min(x, 1 - x)`, as a phase in `[0, 1/2]`.
    pub fn dist_to_int(self) -> Phase {
        if self.0 <= (1u128 << 127) {
            self
        } else {
            Phase(self.0.wrapping_neg())
        }
    }

    pub fn norm(self) -> f64 {
        self.dist_to_int().to_f64()
    }

    /// Length of the arc going forward from `self` to `other`.
    pub fn forward_to(self, other: Phase) -> Phase {
        Phase(other.0.wrapping_sub(self.0))
    }

    /// Length of the arc from `self` forward to `other`, in `(0, 1]`, where
    /// coincident points span the whole circle.
    pub fn arc_len_f64(self, other: Phase) -> f64 {
        let d = self.forward_to(other);
        if d.0 == 0 {
            1.0
        } else {
            d.to_f64()
        }
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase(self.0.wrapping_add(rhs.0))
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        Phase(self.0.wrapping_sub(rhs.0))
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase(self.0.wrapping_neg())
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phase({:.17})", self.to_f64())
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_and_float_agree() {
        assert_eq!(Phase::from_ratio(1, 2), Phase::HALF);
        assert_eq!(Phase::from_f64(0.5), Phase::HALF);
        assert_eq!(Phase::from_f64(0.25), Phase::from_ratio(1, 4));
        assert_eq!(Phase::from_f64(-0.75), Phase::from_ratio(1, 4));
        assert!((Phase::from_ratio(1, 3).to_f64() - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(Phase::from_ratio(-1, 3), Phase::from_ratio(2, 3));
    }

    #[test]
    fn wrapping_is_mod_one() {
        let a = Phase::from_f64(0.75);
        assert_eq!(a + a, Phase::HALF);
        assert_eq!(a.mul_int(4), Phase::ZERO);
        assert_eq!(Phase::from_f64(0.25).mul_i128(-1), Phase::from_f64(0.75));
    }

    #[test]
    fn distance_to_integers() {
        assert_eq!(Phase::from_f64(0.25).norm(), 0.25);
        assert_eq!(Phase::from_f64(0.75).norm(), 0.25);
        assert!((Phase::from_f64(3.2).norm() - 0.2).abs() < 1e-15);
        assert_eq!(Phase::HALF.norm(), 0.5);
    }

    #[test]
    fn arc_lengths() {
        let a = Phase::from_f64(0.9);
        let b = Phase::from_f64(0.1);
        assert!((a.arc_len_f64(b) - 0.2).abs() < 1e-15);
        assert_eq!(a.arc_len_f64(a), 1.0);
    }
}
