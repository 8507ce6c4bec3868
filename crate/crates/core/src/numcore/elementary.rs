//! Elementary functions on balls.
//!
//! Midpoints are evaluated by MPFR (correctly rounded, so the midpoint error
//! is at most one ulp); the input radius is propagated through an explicit
//! bound on the derivative over the input ball.

use rug::float::{Constant, Round};
use rug::ops::Pow;
use rug::{Float, Rational};

use super::ball::{round_to, Ball};
use super::mag::{down, up, Mag, MAG_PREC};
use crate::{Error, Result};

/// The functions accepted by [`elem_eval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elementary {
    Exp,
    Log,
    PowRational,
    Cos,
    Sin,
    Cosh,
    Atan,
}

/// Evaluates `f(x)` (or `x^e` for [`Elementary::PowRational`]).
pub fn elem_eval(f: Elementary, x: &Ball, e: Option<&Rational>, prec: u32) -> Result<Ball> {
    match f {
        Elementary::Exp => Ok(x.exp(prec)),
        Elementary::Log => x.ln(prec),
        Elementary::PowRational => {
            let e = e.ok_or_else(|| Error::precondition("pow_rational needs an exponent"))?;
            x.pow_rational(e, prec)
        }
        Elementary::Cos => Ok(x.cos(prec)),
        Elementary::Sin => Ok(x.sin(prec)),
        Elementary::Cosh => Ok(x.cosh(prec)),
        Elementary::Atan => Ok(x.atan(prec)),
    }
}

/// π with radius at most `2^(2−prec)`.
pub fn const_pi(prec: u32) -> Ball {
    let (mid, err) = round_to(prec.max(2), Constant::Pi);
    Ball::new(mid, err)
}

/// Euler's constant γ.
pub fn const_euler(prec: u32) -> Ball {
    let (mid, err) = round_to(prec.max(2), Constant::Euler);
    Ball::new(mid, err)
}

/// Upper bound of `e^x` for a float `x`.
fn exp_up(x: &Float) -> Mag {
    let y = up(x);
    Mag::from_upper(Float::with_val_round(MAG_PREC, y.exp_ref(), Round::Up).0)
}

impl Ball {
    pub fn exp(&self, prec: u32) -> Ball {
        let (mid, err) = round_to(prec, self.mid().exp_ref());
        if self.is_exact() {
            return Ball::new(mid, err);
        }
        // sup exp' = exp(m + r)
        let rad = self.rad().mul(&exp_up(&self.upper())).add(&err);
        Ball::new(mid, rad)
    }

    pub fn ln(&self, prec: u32) -> Result<Ball> {
        if !self.is_positive() {
            return Err(Error::domain("logarithm of a non-positive ball"));
        }
        let (mid, err) = round_to(prec, self.mid().ln_ref());
        if self.is_exact() {
            return Ok(Ball::new(mid, err));
        }
        // sup |1/t| = 1/(m − r)
        let rad = self.rad().div_lower(&down(&self.lower())).add(&err);
        Ok(Ball::new(mid, rad))
    }

    pub fn cos(&self, prec: u32) -> Ball {
        let (mid, err) = round_to(prec, self.mid().cos_ref());
        Ball::new(mid, self.rad().add(&err))
    }

    pub fn sin(&self, prec: u32) -> Ball {
        let (mid, err) = round_to(prec, self.mid().sin_ref());
        Ball::new(mid, self.rad().add(&err))
    }

    pub fn atan(&self, prec: u32) -> Ball {
        let (mid, err) = round_to(prec, self.mid().atan_ref());
        Ball::new(mid, self.rad().add(&err))
    }

    pub fn cosh(&self, prec: u32) -> Ball {
        let (mid, err) = round_to(prec, self.mid().cosh_ref());
        if self.is_exact() {
            return Ball::new(mid, err);
        }
        Ball::new(mid, self.rad().mul(&self.cosh_sup()).add(&err))
    }

    pub fn sinh(&self, prec: u32) -> Ball {
        let (mid, err) = round_to(prec, self.mid().sinh_ref());
        if self.is_exact() {
            return Ball::new(mid, err);
        }
        Ball::new(mid, self.rad().mul(&self.cosh_sup()).add(&err))
    }

    /// Upper bound of `cosh` over the ball, which also bounds `|sinh'|`, `|cosh'|`.
    fn cosh_sup(&self) -> Mag {
        let m = self.mag();
        Mag::from_upper(Float::with_val_round(MAG_PREC, m.as_float().cosh_ref(), Round::Up).0)
    }

    /// `x^e` for rational `e`. Non-integer exponents need a strictly positive ball.
    pub fn pow_rational(&self, e: &Rational, prec: u32) -> Result<Ball> {
        let (num, den) = (e.numer(), e.denom());
        if *den == 1 {
            let n = num
                .to_i64()
                .ok_or_else(|| Error::resource("integer exponent out of range"))?;
            return self.pow_i64(n, prec);
        }
        if !self.is_positive() {
            return Err(Error::domain("rational power of a non-positive ball"));
        }
        let (u, v) = match (num.to_i32(), den.to_u32()) {
            (Some(u), Some(v)) if u.unsigned_abs() < (1 << 20) => (u, v),
            _ => {
                let wp = prec + 32;
                let l = self.ln(wp)?;
                return Ok(l.mul(&Ball::from_rational(e, wp), wp).exp(prec));
            }
        };
        // mid = (m^(1/v))^u, each MPFR step correctly rounded at wp bits
        let wp = prec + 8 + (32 - u.unsigned_abs().leading_zeros());
        let root = Float::with_val(wp, self.mid().root_ref(v));
        let powered = Float::with_val(wp, root.pow(u));
        let (mid, err) = round_to(prec, &powered);
        // relative error of `powered` ≤ (|u| + 1)·2^(1−wp) ≤ 2^(log2(|u|+1) + 1 − wp)
        let bits = 64 - (u.unsigned_abs() as u64 + 1).leading_zeros() as i64;
        let rel = Mag::pow2(bits + 1 - wp as i64);
        let mut rad = Mag::from_abs(&powered).mul(&rel).add(&err);
        if !self.is_exact() {
            // |e|·sup t^(e−1) over [m − r, m + r]; the sup sits at an endpoint
            let em1 = Rational::from(e - 1u32);
            let lo = Ball::exact(self.lower()).pow_rational_bound(&em1)?;
            let hi = Ball::exact(self.upper()).pow_rational_bound(&em1)?;
            let deriv = lo.max(&hi).mul(&Mag::from_upper(up(&e.clone().abs())));
            rad = rad.add(&self.rad().mul(&deriv));
        }
        Ok(Ball::new(mid, rad))
    }

    /// Upper bound of `x^e` for an exact positive `x`, at low precision.
    fn pow_rational_bound(&self, e: &Rational) -> Result<Mag> {
        if *e.denom() == 1 {
            return Ok(self.pow_i64(e.numer().to_i64().unwrap_or(i64::MAX), 2 * MAG_PREC)?.mag());
        }
        let wp = 2 * MAG_PREC;
        let l = self.ln(wp)?;
        Ok(l.mul(&Ball::from_rational(e, wp), wp).exp(wp).mag())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::decimal::parse_decimal;

    fn dec(s: &str) -> Ball {
        parse_decimal(s, 200).unwrap()
    }

    #[test]
    fn identity_cases() {
        let e0 = Ball::zero().exp(64);
        assert!(e0.contains_rational(&Rational::from(1)));
        assert!(e0.is_exact());
        let l1 = Ball::one().ln(64).unwrap();
        assert!(l1.contains_zero());
    }

    #[test]
    fn pow_rational_sqrt_two() {
        let r = Ball::from_i64(2)
            .pow_rational(&Rational::from((1, 2)), 128)
            .unwrap();
        assert!(r.overlaps(&dec("1.41421356237309504880168872420969807857")));
        assert!(r.rad().le_pow2(-120));
    }

    #[test]
    fn pow_rational_inexact_base_contains_endpoints() {
        let x = Ball::new(Float::with_val(64, 3), Mag::pow2(-10));
        let e = Rational::from((-5, 3));
        let r = x.pow_rational(&e, 64).unwrap();
        for t in [3.0 - 1.0 / 1024.0, 3.0 + 1.0 / 1024.0] {
            let v = Float::with_val(64, t).pow(-5.0f64 / 3.0);
            assert!(r.contains_float(&v));
        }
    }

    #[test]
    fn log_domain() {
        let x = Ball::new(Float::with_val(64, 1), Mag::from_u64(2));
        assert!(x.ln(64).is_err());
        assert!(Ball::from_i64(-1)
            .pow_rational(&Rational::from((1, 3)), 64)
            .is_err());
    }

    #[test]
    fn pi_constant() {
        let p64 = const_pi(64);
        assert!(p64.overlaps(&dec("3.14159265358979323846264338327950288")));
        assert!(p64.rad().le_pow2(2 - 64));
        let p8 = const_pi(8);
        let p256 = const_pi(256);
        assert!(p8.overlaps(&p256));
        assert!(p64.contains_float(p256.mid()));
    }

    #[test]
    fn euler_constant() {
        assert!(const_euler(128).overlaps(&dec("0.5772156649015328606065120900824024310421593359399235988")));
    }

    #[test]
    fn trig_and_hyperbolic() {
        let x = Ball::new(Float::with_val(64, 1), Mag::pow2(-20));
        let c = x.cos(64);
        let s = x.sin(64);
        let one = c.sqr(64).add(&s.sqr(64), 64);
        assert!(one.contains_rational(&Rational::from(1)));
        assert!(x.cosh(64).overlaps(&dec("1.5430806348152437784779056207570616826")));
        assert!(x.atan(64).overlaps(&dec("0.78539816339744830961566084581987572105")));
        assert!(elem_eval(Elementary::Exp, &x, None, 64).unwrap().overlaps(&dec("2.718281828459045235360287")));
    }
}
