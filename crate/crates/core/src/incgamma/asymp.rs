//! `Γ(a, x) = x^{a−1} e^{−x} [Σ_{n<N} (1−a)_n/(−x)^n + R_N]` with
//! `|R_N| ≤ |(1−a)_N|/x^N` for real `a`, `x > 0`, `N ≥ a − 1`.

use rug::{Float, Integer, Rational};

use super::{dyadic_parts, log2_add, term_cap_error, LOG2_E, MAX_TERMS};
use crate::binsplit::{bsplit_product, RatMatrix};
use crate::numcore::{Ball, Mag};
use crate::{Error, Result};

/// Result of [`asymp_series`].
#[derive(Debug, Clone)]
pub enum AsympOutcome {
    /// Enclosure, number of terms, and absolute truncation bound.
    Value(Ball, u64, Mag),
    /// The smallest remainder bound exceeds the tolerance.
    NotAccurateEnough,
}

impl AsympOutcome {
    pub fn value(&self) -> Option<&Ball> {
        match self {
            AsympOutcome::Value(v, _, _) => Some(v),
            AsympOutcome::NotAccurateEnough => None,
        }
    }
}

/// `U_n = [[(a−n−1)/x, 0], [1, 1]]` over a common denominator.
fn asymp_factor(a: &Rational, xn: &Integer, g: u32) -> impl Fn(u64) -> RatMatrix + Sync {
    let (an, ad) = (a.numer().clone(), a.denom().clone());
    let den = Integer::from(&ad * xn);
    move |n: u64| {
        let num = (Integer::from(&an) - Integer::from(&ad * (n + 1))) << g;
        RatMatrix::from_integers(2, vec![num, Integer::new(), den.clone(), den.clone()], den.clone())
    }
}

fn asymp_product(a: &Rational, x: &Float, n: u64) -> Result<RatMatrix> {
    if n == 0 {
        return Ok(RatMatrix::identity(2));
    }
    let (xn, g) = dyadic_parts(x);
    bsplit_product(&asymp_factor(a, &xn, g), 0, n)
}

/// Exact partial sum `Σ_{n<N} (1−a)_n/(−x)^n`.
pub fn asymp_partial_sum(a: &Rational, x: &Float, n: u64) -> Result<Rational> {
    if n == 0 {
        return Ok(Rational::new());
    }
    Ok(asymp_product(a, x, n)?.entry(1, 0))
}

/// `|(1−a)_N|/x^N`, a bound for `|R_N|`; infinite when `N < a − 1`.
pub fn asymp_tail_bound(a: &Rational, x: &Float, n: u64) -> Result<Mag> {
    let p = asymp_product(a, x, n)?;
    Ok(tail_from_product(a, n, &p))
}

fn tail_from_product(a: &Rational, n: u64, p: &RatMatrix) -> Mag {
    if Rational::from(a - 1u32) > n {
        return Mag::inf();
    }
    p.entry_ball(0, 0, 64).mag()
}

/// Smallest admissible `N` meeting `target_log2` for the remainder, and
/// log₂ Σ|t_n|; `None` if the minimal remainder is too large.
fn plan(a: &Rational, x: &Float, target_log2: f64) -> Result<Option<(u64, f64)>> {
    let af = a.to_f64();
    let xf = x.to_f64();
    let lx = xf.log2();
    let min_n = (af - 1.0).ceil().max(0.0) as u64;
    let mut lt = 0.0f64; // log₂ |(1−a)_n / x^n|
    let mut ls = f64::NEG_INFINITY;
    let mut n = 0u64;
    // terms decrease while |1−a+n| < x; past that point they only grow
    let last = (xf + af.abs() + 2.0).min(MAX_TERMS as f64) as u64;
    loop {
        if n >= min_n.max(1) && lt <= target_log2 {
            return Ok(Some((n, ls)));
        }
        if n > last {
            return Ok(None);
        }
        ls = log2_add(ls, lt);
        let f = 1.0 - af + n as f64;
        if f == 0.0 {
            // the series terminates: (1−a)_m = 0 for m > n
            return Ok(Some(((n + 1).max(min_n), ls)));
        }
        lt += f.abs().log2() - lx;
        n += 1;
        if n > MAX_TERMS {
            return Err(term_cap_error("asymptotic series"));
        }
    }
}

/// The asymptotic expansion at infinity with absolute error about
/// `2^{−tol_bits}`, or [`AsympOutcome::NotAccurateEnough`].
pub fn asymp_series(a: &Rational, x: &Float, tol_bits: i64) -> Result<AsympOutcome> {
    asymp_series_info(a, x, tol_bits)
}

pub(crate) fn asymp_series_info(a: &Rational, x: &Float, tol_bits: i64) -> Result<AsympOutcome> {
    if !(x.is_finite() && *x > 0) {
        return Err(Error::precondition("asymptotic series needs x > 0"));
    }
    let af = a.to_f64();
    let xf = x.to_f64();
    let lpref = ((af - 1.0) * xf.log2() - xf * LOG2_E).max(-1e300);
    let Some((n, ls)) = plan(a, x, -(tol_bits as f64) - 4.0 - lpref)? else {
        return Ok(AsympOutcome::NotAccurateEnough);
    };
    let mag = (lpref + ls).max(0.0).ceil() as i64;
    let wp = (tol_bits + mag + 64 - n.leading_zeros() as i64 + 24).max(64) as u32;
    let p = asymp_product(a, x, n)?;
    let tail = tail_from_product(a, n, &p);
    let sum = if n == 0 {
        Ball::zero()
    } else {
        p.entry_ball(1, 0, wp)
    }
    .add_error(&tail);
    let xb = Ball::exact(x.clone());
    let am1 = Rational::from(a - 1u32);
    let pref = xb.pow_rational(&am1, wp)?.mul(&xb.neg().exp(wp), wp);
    let v = pref.mul(&sum, wp);
    let tail_abs = pref.mag().mul(&tail);
    Ok(AsympOutcome::Value(v, n, tail_abs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::parse_decimal;

    #[test]
    fn terminating_at_integer_a() {
        let x = Float::with_val(64, 50);
        let AsympOutcome::Value(v, n, tail) = asymp_series(&Rational::from(1), &x, 64).unwrap() else {
            panic!("expected a value");
        };
        assert_eq!(n, 1);
        assert!(tail.is_zero());
        let e = Ball::from_i64(-50).exp(128);
        assert!(v.overlaps(&e));
    }

    #[test]
    fn not_accurate_enough() {
        let x = Float::with_val(64, 4);
        let r = asymp_series(&Rational::from((1, 2)), &x, 256).unwrap();
        assert!(matches!(r, AsympOutcome::NotAccurateEnough));
    }

    #[test]
    fn half_at_hundred() {
        let x = Float::with_val(64, 100);
        let v = asymp_series(&Rational::from((1, 2)), &x, 64).unwrap();
        let v = v.value().unwrap();
        let want = parse_decimal("3.7017478604082789203e-45 +/- 1e-63", 128).unwrap();
        assert!(v.overlaps(&want));
    }
}
