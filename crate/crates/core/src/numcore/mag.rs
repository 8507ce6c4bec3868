use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::ops::{AddAssignRound, AssignRound, MulAssignRound};
use rug::Float;

/// Working precision of radii and error bounds.
pub const MAG_PREC: u32 = 30;

/// Rounds `val` to `MAG_PREC` bits towards +∞.
pub(crate) fn up<T>(val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(MAG_PREC, val, Round::Up).0
}

/// Rounds `val` to `MAG_PREC` bits towards −∞.
pub(crate) fn down<T>(val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(MAG_PREC, val, Round::Down).0
}

/// A nonnegative upper bound stored at low precision.
///
/// Every operation rounds towards +∞, so a `Mag` computed from valid upper
/// bounds is again a valid upper bound. Infinity is representable and
/// absorbs everything.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Mag(Float);

impl Mag {
    pub fn zero() -> Self {
        Mag(Float::new(MAG_PREC))
    }

    pub fn inf() -> Self {
        Mag(Float::with_val(MAG_PREC, rug::float::Special::Infinity))
    }

    /// Upper bound for `|x|`.
    pub fn from_abs(x: &Float) -> Self {
        let mut m = up(x);
        m.abs_mut();
        Mag(m)
    }

    pub fn from_u64(n: u64) -> Self {
        Mag(up(n))
    }

    /// Upper bound for a value known only as an `f64` (must be ≥ 0).
    pub fn from_f64(v: f64) -> Self {
        debug_assert!(v >= 0.0 || v.is_nan());
        if v.is_nan() {
            return Mag::inf();
        }
        Mag(up(v))
    }

    /// Exactly `2^e`.
    pub fn pow2(e: i64) -> Self {
        let e = e.clamp(i32::MIN as i64 / 2, i32::MAX as i64 / 2) as i32;
        Mag(Float::with_val(MAG_PREC, Float::i_exp(1, e)))
    }

    /// Wraps a float that is already a valid upper bound (`x ≥ 0`).
    pub(crate) fn from_upper(x: Float) -> Self {
        debug_assert!(!x.is_sign_negative() || x.is_zero());
        if x.is_nan() {
            return Mag::inf();
        }
        let mut m = up(&x);
        if m.is_sign_negative() {
            m = Float::new(MAG_PREC);
        }
        Mag(m)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn add(&self, other: &Mag) -> Mag {
        let mut r = self.0.clone();
        r.add_assign_round(&other.0, Round::Up);
        Mag(r)
    }

    pub fn mul(&self, other: &Mag) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::zero();
        }
        let mut r = self.0.clone();
        r.mul_assign_round(&other.0, Round::Up);
        Mag(r)
    }

    /// `self / d` where `d` is a positive lower bound of the true divisor.
    pub fn div_lower(&self, d: &Float) -> Mag {
        if self.is_zero() {
            return Mag::zero();
        }
        if !(d.is_sign_positive() && !d.is_zero()) {
            return Mag::inf();
        }
        Mag(Float::with_val_round(MAG_PREC, &self.0 / d, Round::Up).0)
    }

    pub fn mul_2exp(&self, e: i64) -> Mag {
        let e = e.clamp(i32::MIN as i64 / 2, i32::MAX as i64 / 2) as i32;
        let mut r = self.0.clone();
        r <<= e;
        Mag(r)
    }

    pub fn pow_u(&self, n: u32) -> Mag {
        let mut acc = Mag::from_u64(1);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn max(&self, other: &Mag) -> Mag {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// `⌈log₂ self⌉`, or `None` for zero. Infinite values map to `i64::MAX`.
    pub fn log2_ceil(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        if !self.0.is_finite() {
            return Some(i64::MAX);
        }
        // self ∈ [2^(e-1), 2^e)
        let e = self.0.get_exp().unwrap() as i64;
        let pow = Float::with_val(MAG_PREC, Float::i_exp(1, (e - 1) as i32));
        Some(if self.0 == pow { e - 1 } else { e })
    }

    /// Approximate `log₂ self` as an `f64` (for heuristics only).
    pub fn log2_approx(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        if !self.0.is_finite() {
            return f64::INFINITY;
        }
        let (m, e) = self.0.to_f64_exp();
        m.log2() + e as f64
    }

    /// Whether `self ≤ 2^e`.
    pub fn le_pow2(&self, e: i64) -> bool {
        *self <= Mag::pow2(e)
    }
}

impl fmt::Debug for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6e}", self.0.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_rounds_up() {
        let third = Mag::from_u64(1).div_lower(&Float::with_val(64, 3));
        // 3 * (1/3 rounded up) must not fall below 1
        assert!(third.mul(&Mag::from_u64(3)) >= Mag::from_u64(1));
        assert_eq!(Mag::pow2(-10).log2_ceil(), Some(-10));
        assert_eq!(Mag::from_u64(3).log2_ceil(), Some(2));
        assert!(Mag::pow2(-70).le_pow2(-70));
        assert!(!Mag::pow2(-69).le_pow2(-70));
    }

    #[test]
    fn pow_and_zero() {
        assert_eq!(Mag::from_u64(3).pow_u(4), Mag::from_u64(81));
        assert!(Mag::zero().mul(&Mag::inf()).is_zero());
        assert!(!Mag::from_u64(5).div_lower(&Float::new(10)).is_finite());
    }
}
