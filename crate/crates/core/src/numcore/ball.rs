use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::ops::AssignRound;
use rug::{Float, Integer, Rational};

use super::mag::{down, Mag, MAG_PREC};
use crate::{Error, Result};

/// Error of a midpoint rounded to nearest at its own precision: one ulp,
/// or zero when the rounding was exact.
pub(crate) fn rounding_error(x: &Float, ord: Ordering) -> Mag {
    if ord == Ordering::Equal || x.is_zero() {
        return Mag::zero();
    }
    match x.get_exp() {
        Some(e) => Mag::pow2(e as i64 - x.prec() as i64),
        None => Mag::inf(),
    }
}

/// Rounds `val` to nearest at `prec` bits, returning the value and an upper
/// bound for the rounding error.
pub(crate) fn round_to<T>(prec: u32, val: T) -> (Float, Mag)
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    let (x, ord) = Float::with_val_round(prec, val, Round::Nearest);
    let err = rounding_error(&x, ord);
    (x, err)
}

/// A real ball `[mid − rad, mid + rad]`.
///
/// Every operation takes an explicit output precision and returns a ball that
/// contains the exact image of its input sets. Exact dyadic results that fit
/// in the output precision come back with zero radius.
#[derive(Clone)]
pub struct Ball {
    mid: Float,
    rad: Mag,
}

impl Ball {
    pub fn new(mid: Float, rad: Mag) -> Self {
        Ball { mid, rad }
    }

    /// An exact ball (zero radius).
    pub fn exact(mid: Float) -> Self {
        Ball {
            mid,
            rad: Mag::zero(),
        }
    }

    pub fn zero() -> Self {
        Ball::exact(Float::new(MAG_PREC))
    }

    pub fn one() -> Self {
        Ball::from_i64(1)
    }

    pub fn from_i64(n: i64) -> Self {
        Ball::exact(Float::with_val(64, n))
    }

    pub fn from_u64(n: u64) -> Self {
        Ball::exact(Float::with_val(64, n))
    }

    pub fn from_integer(n: &Integer, prec: u32) -> Self {
        let (mid, rad) = round_to(prec, n);
        Ball { mid, rad }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        let (mid, rad) = round_to(prec, q);
        Ball { mid, rad }
    }

    /// `0 ± r`.
    pub fn zero_with_rad(rad: Mag) -> Self {
        Ball {
            mid: Float::new(MAG_PREC),
            rad,
        }
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Mag {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.mid.is_finite() && self.rad.is_finite()
    }

    /// Adds `err` to the radius.
    pub fn add_error(&self, err: &Mag) -> Ball {
        Ball {
            mid: self.mid.clone(),
            rad: self.rad.add(err),
        }
    }

    /// Rounds the midpoint to `prec` bits, absorbing the error in the radius.
    pub fn round(&self, prec: u32) -> Ball {
        let (mid, err) = round_to(prec, &self.mid);
        Ball {
            mid,
            rad: self.rad.add(&err),
        }
    }

    /// Lower endpoint, rounded towards −∞.
    pub fn lower(&self) -> Float {
        let prec = self.mid.prec().max(MAG_PREC) + 2;
        let mut x = Float::with_val(prec, &self.mid);
        x.assign_round(&self.mid - self.rad.as_float(), Round::Down);
        x
    }

    /// Upper endpoint, rounded towards +∞.
    pub fn upper(&self) -> Float {
        let prec = self.mid.prec().max(MAG_PREC) + 2;
        let mut x = Float::with_val(prec, &self.mid);
        x.assign_round(&self.mid + self.rad.as_float(), Round::Up);
        x
    }

    /// Upper bound for `sup |x|` over the ball.
    pub fn mag(&self) -> Mag {
        Mag::from_abs(&self.mid).add(&self.rad)
    }

    /// Lower bound for `inf |x|` over the ball (zero if the ball contains 0).
    pub fn mag_lower(&self) -> Float {
        if self.contains_zero() {
            return Float::new(MAG_PREC);
        }
        let a = down(&*self.mid.as_abs());
        let m = Float::with_val_round(MAG_PREC, &a - self.rad.as_float(), Round::Down).0;
        if m.is_sign_negative() {
            Float::new(MAG_PREC)
        } else {
            m
        }
    }

    pub fn contains_zero(&self) -> bool {
        let r = self.rad.as_float();
        *self.mid.as_abs() <= *r
    }

    pub fn is_positive(&self) -> bool {
        self.lower() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.upper() < 0
    }

    pub fn is_nonnegative(&self) -> bool {
        self.lower() >= 0
    }

    pub fn contains_float(&self, x: &Float) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        let lo = self.lower().to_rational();
        let hi = self.upper().to_rational();
        match (lo, hi) {
            (Some(lo), Some(hi)) => lo <= *q && *q <= hi,
            _ => !self.is_finite(),
        }
    }

    pub fn contains_integer(&self, n: &Integer) -> bool {
        self.contains_rational(&Rational::from(n.clone()))
    }

    /// Whether `other` is a subset of `self`.
    pub fn contains(&self, other: &Ball) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    /// Whether the two balls intersect (`|m₁ − m₂| ≤ r₁ + r₂`).
    pub fn overlaps(&self, other: &Ball) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// The unique integer inside the ball, if there is exactly one.
    pub fn unique_integer(&self) -> Option<Integer> {
        if !self.is_finite() {
            return None;
        }
        let lo = self.lower().ceil().to_integer()?;
        let hi = self.upper().floor().to_integer()?;
        if lo == hi {
            Some(lo)
        } else {
            None
        }
    }

    // Arithmetic --------------------------------------------------------

    pub fn neg(&self) -> Ball {
        Ball {
            mid: -self.mid.clone(),
            rad: self.rad.clone(),
        }
    }

    pub fn abs(&self) -> Ball {
        Ball {
            mid: self.mid.clone().abs(),
            rad: self.rad.clone(),
        }
    }

    pub fn add(&self, other: &Ball, prec: u32) -> Ball {
        let (mid, err) = round_to(prec, &self.mid + &other.mid);
        Ball {
            mid,
            rad: self.rad.add(&other.rad).add(&err),
        }
    }

    pub fn sub(&self, other: &Ball, prec: u32) -> Ball {
        let (mid, err) = round_to(prec, &self.mid - &other.mid);
        Ball {
            mid,
            rad: self.rad.add(&other.rad).add(&err),
        }
    }

    pub fn mul(&self, other: &Ball, prec: u32) -> Ball {
        let (mid, err) = round_to(prec, &self.mid * &other.mid);
        let rad = Mag::from_abs(&self.mid)
            .mul(&other.rad)
            .add(&Mag::from_abs(&other.mid).mul(&self.rad))
            .add(&self.rad.mul(&other.rad))
            .add(&err);
        Ball { mid, rad }
    }

    pub fn sqr(&self, prec: u32) -> Ball {
        self.mul(self, prec)
    }

    pub fn mul_i64(&self, n: i64, prec: u32) -> Ball {
        let (mid, err) = round_to(prec, &self.mid * n);
        let rad = self
            .rad
            .mul(&Mag::from_u64(n.unsigned_abs()))
            .add(&err);
        Ball { mid, rad }
    }

    pub fn mul_rational(&self, q: &Rational, prec: u32) -> Ball {
        if *q.denom() == 1 {
            let n = Ball::exact(Float::with_val(
                q.numer().significant_bits().max(1),
                q.numer(),
            ));
            return self.mul(&n, prec);
        }
        self.mul(&Ball::from_rational(q, prec + 8), prec)
    }

    /// Multiplication by `2^e` (exact).
    pub fn mul_2exp(&self, e: i32) -> Ball {
        let mut mid = self.mid.clone();
        mid <<= e;
        Ball {
            mid,
            rad: self.rad.mul_2exp(e as i64),
        }
    }

    pub fn div(&self, other: &Ball, prec: u32) -> Result<Ball> {
        if other.contains_zero() {
            return Err(Error::domain("division by a ball containing zero"));
        }
        let (mid, err) = round_to(prec, &self.mid / &other.mid);
        let rad = if self.rad.is_zero() && other.rad.is_zero() {
            err
        } else {
            // |x/y − xm/ym| ≤ (|xm|·ry + |ym|·rx) / (|ym|·(|ym| − ry))
            let num = Mag::from_abs(&self.mid)
                .mul(&other.rad)
                .add(&Mag::from_abs(&other.mid).mul(&self.rad));
            let ym = down(&*other.mid.as_abs());
            let ylow = other.mag_lower();
            let den = down(&ym * &ylow);
            num.div_lower(&den).add(&err)
        };
        Ok(Ball { mid, rad })
    }

    pub fn div_i64(&self, n: i64, prec: u32) -> Result<Ball> {
        if n == 0 {
            return Err(Error::domain("division by zero"));
        }
        let (mid, err) = round_to(prec, &self.mid / n);
        let rad = self
            .rad
            .div_lower(&Float::with_val(64, n.unsigned_abs()))
            .add(&err);
        Ok(Ball { mid, rad })
    }

    pub fn recip(&self, prec: u32) -> Result<Ball> {
        Ball::one().div(self, prec)
    }

    pub fn sqrt(&self, prec: u32) -> Result<Ball> {
        if self.rad.is_zero() {
            if self.mid.is_sign_negative() && !self.mid.is_zero() {
                return Err(Error::domain("square root of a negative number"));
            }
            let (mid, err) = round_to(prec, self.mid.sqrt_ref());
            return Ok(Ball { mid, rad: err });
        }
        let hi = self.upper();
        if hi < 0 {
            return Err(Error::domain("square root of a negative ball"));
        }
        let lo = self.lower();
        if lo <= 0 {
            return Ok(Ball::hull_zero_to(&hi, prec));
        }
        let (mid, err) = round_to(prec, self.mid.sqrt_ref());
        // |√t − √m| ≤ r / (√t + √m) ≤ r / √(m − r)
        let den = down(lo.sqrt_ref());
        let rad = self.rad.div_lower(&den).add(&err);
        Ok(Ball { mid, rad })
    }

    /// Enclosure of `[0, √hi]`.
    fn hull_zero_to(hi: &Float, prec: u32) -> Ball {
        let top = super::mag::up(hi.sqrt_ref());
        let mut mid = Float::with_val(prec.max(MAG_PREC), &top);
        mid >>= 1;
        let rad = Mag::from_abs(&mid).add(&Mag::pow2(-(prec as i64)));
        Ball { mid, rad }
    }

    /// Integer power by repeated squaring.
    pub fn pow_u64(&self, n: u64, prec: u32) -> Ball {
        let wp = prec + 2 * (64 - n.leading_zeros()) + 4;
        let mut acc = Ball::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, wp);
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr(wp);
            }
        }
        acc.round(prec)
    }

    pub fn pow_i64(&self, n: i64, prec: u32) -> Result<Ball> {
        if n >= 0 {
            Ok(self.pow_u64(n as u64, prec))
        } else {
            let wp = prec + 8;
            self.pow_u64(n.unsigned_abs(), wp).recip(prec)
        }
    }

    /// Smallest ball containing both inputs.
    pub fn union(&self, other: &Ball, prec: u32) -> Ball {
        let lo = if self.lower() < other.lower() {
            self.lower()
        } else {
            other.lower()
        };
        let hi = if self.upper() > other.upper() {
            self.upper()
        } else {
            other.upper()
        };
        Ball::from_endpoints(&lo, &hi, prec)
    }

    /// A ball containing `[lo, hi]`.
    pub fn from_endpoints(lo: &Float, hi: &Float, prec: u32) -> Ball {
        let wp = prec.max(lo.prec()).max(hi.prec()) + 2;
        let (mut mid, err) = round_to(wp, lo + hi);
        mid >>= 1;
        let (mid, err2) = round_to(prec, &mid);
        let half = super::mag::up(hi - lo);
        let rad = Mag::from_upper(half).mul_2exp(-1).add(&err.mul_2exp(-1)).add(&err2);
        Ball { mid, rad }
    }
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.prec() as f64) * std::f64::consts::LOG10_2).ceil() as usize;
        write!(f, "{}", super::decimal::to_decimal(self, digits.clamp(3, 40)))
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
