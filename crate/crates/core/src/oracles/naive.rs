//! `Γ(a, z)` by direct term-by-term summation in ball arithmetic.
//!
//! For `a ∉ {0, −1, …}`: `Γ(a, z) = Γ(a) − z^a e^{−z} Σ_{k≥0} z^k/(a)_{k+1}`,
//! with `Γ(a)` from MPFR. For `a = −n`:
//! `Γ(−n, z) = ((−1)^n/n!) [E₁(z) − e^{−z} Σ_{k<n} (−1)^k k!/z^{k+1}]`,
//! `E₁(z) = −γ − log z − Σ_{k≥1} (−z)^k/(k·k!)`.
//!
//! Once the term ratio is at most 1/2 in absolute value (and stays so), the
//! remaining tail is bounded by twice the last term.

use std::time::Instant;

use rug::{Float, Integer, Rational};

use super::{OracleMethod, OracleResult};
use crate::afe::LValue;
use crate::numcore::{const_euler, Ball, Mag};
use crate::{Error, Result};

const MAX_TERMS: u64 = 10_000_000;

/// `Γ(a)` from MPFR. Rounding `a` to `a(1+ε)` changes `Γ(a)` by a relative
/// `≈ |a ψ(a)| ε`, and `|a ψ(a)| ≤ |a|(log(|a|+2) + den(a) + 10)` since `a` is
/// at least `1/den(a)` away from the poles; the extra bits absorb that.
fn gamma_mpfr(a: &Rational, wp: u32) -> Ball {
    let af = a.to_f64().abs();
    let d = a.denom().to_f64();
    let margin = ((af + 1.0) * ((af + 2.0).ln() + d + 10.0)).log2().ceil() as u32;
    let x = Float::with_val(wp + 32 + margin, a);
    let g = x.gamma();
    let r = Mag::from_abs(&g).mul_2exp(-(wp as i64) - 16);
    Ball::new(g, r).round(wp)
}

/// `Σ_{k≥0} z^k/(a)_{k+1}` by summing terms until they are negligible.
fn lower_series(a: &Rational, z: &Ball, wp: u32, tol: i64) -> Result<(Ball, u64)> {
    let ab = Ball::from_rational(a, wp);
    let mut term = ab.recip(wp)?;
    let mut sum = term.clone();
    let zf = z.upper().to_f64();
    let af = a.to_f64();
    let mut k = 0u64;
    loop {
        // ratio for the next term: z/(a+k+1)
        let d = af + k as f64 + 1.0;
        if d > 0.0 && zf / d <= 0.5 && term.mag().le_pow2(tol - 1) {
            return Ok((sum.add_error(&term.mag().mul_2exp(1)), k + 1));
        }
        k += 1;
        if k > MAX_TERMS {
            return Err(Error::resource("naive incomplete gamma: too many terms"));
        }
        let den = ab.add(&Ball::from_u64(k), wp);
        term = term.mul(z, wp).div(&den, wp)?;
        sum = sum.add(&term, wp);
    }
}

/// `Σ_{k≥1} (−z)^k/(k·k!)`.
fn e1_series(z: &Ball, wp: u32, tol: i64) -> Result<(Ball, u64)> {
    let mz = z.neg();
    let mut pw = Ball::one(); // (−z)^k/k!
    let mut sum = Ball::zero();
    let zf = z.upper().to_f64();
    let mut k = 0u64;
    loop {
        k += 1;
        pw = pw.mul(&mz, wp).div_i64(k as i64, wp)?;
        let t = pw.div_i64(k as i64, wp)?;
        sum = sum.add(&t, wp);
        if zf / (k + 1) as f64 <= 0.5 && t.mag().le_pow2(tol - 1) {
            return Ok((sum.add_error(&t.mag().mul_2exp(1)), k));
        }
        if k > MAX_TERMS {
            return Err(Error::resource("naive incomplete gamma: too many terms"));
        }
    }
}

fn attempt(a: &Rational, z: &Ball, p: i64, wp: u32) -> Result<(Ball, u64)> {
    let tol = -p - 4;
    if *a.denom() == 1 && *a <= 0 {
        let n = (-a.numer().clone()).to_u32().ok_or_else(|| Error::resource("a too large"))?;
        let (s, terms) = e1_series(z, wp, tol - 4)?;
        let e1 = const_euler(wp).add(&z.ln(wp)?, wp).add(&s, wp).neg();
        let ez = z.neg().exp(wp);
        let mut fin = Ball::zero();
        let mut kf = Integer::from(1);
        for k in 0..n {
            if k > 0 {
                kf *= k;
            }
            let t = Ball::from_integer(&kf, wp)
                .div(&z.pow_u64(k as u64 + 1, wp), wp)?;
            fin = if k % 2 == 0 { fin.add(&t, wp) } else { fin.sub(&t, wp) };
        }
        let nf = Ball::from_integer(&Integer::from(Integer::factorial(n)), wp);
        let mut v = e1.sub(&ez.mul(&fin, wp), wp).div(&nf, wp)?;
        if n % 2 == 1 {
            v = v.neg();
        }
        return Ok((v, terms + n as u64));
    }
    let (s, terms) = lower_series(a, z, wp, tol - 4 - estimate_scale(a, z))?;
    let pref = z.pow_rational(a, wp)?.mul(&z.neg().exp(wp), wp);
    let v = gamma_mpfr(a, wp).sub(&pref.mul(&s, wp), wp);
    Ok((v, terms))
}

/// log₂ of `|z^a e^{−z}|`, rounded up, for scaling the series tolerance.
fn estimate_scale(a: &Rational, z: &Ball) -> i64 {
    let zf = z.mid().to_f64();
    ((a.to_f64() * zf.log2() - zf * std::f64::consts::LOG2_E).ceil() as i64).max(-100_000)
}

/// `Γ(a, z)` for `z > 0` with absolute error about `2^{−p}` (plus the
/// propagated input radius).
pub fn incgamma_naive(a: &Rational, z: &Ball, p: i64) -> Result<OracleResult> {
    if !z.is_positive() {
        return Err(Error::domain("incomplete gamma needs z > 0"));
    }
    let t = Instant::now();
    let zf = z.mid().to_f64();
    let af = a.to_f64();
    // cancellation in the series is at most about e^{2z} z^{|a|}
    let mut guard = (2.0 * zf * std::f64::consts::LOG2_E).ceil() as i64
        + ((af.abs() + 2.0) * (zf + 2.0).log2()).ceil() as i64
        + 32;
    // the midpoint is evaluated; the radius contributes rad·sup|t^{a−1}e^{−t}|
    let zm = Ball::exact(z.mid().clone());
    let input_err = if z.is_exact() {
        Mag::zero()
    } else {
        let w = 64;
        let am1 = Rational::from(a - 1u32);
        let d = z.pow_rational(&am1, w)?.mul(&z.neg().exp(w), w);
        z.rad().mul(&d.mag())
    };
    for _ in 0..6 {
        let wp = (p + guard).max(64) as u32;
        let (v, terms) = attempt(a, &zm, p, wp)?;
        let excess = v.rad().log2_approx() + p as f64;
        if excess <= 0.0 {
            return Ok(OracleResult {
                value: LValue::Real(v.add_error(&input_err)),
                method: OracleMethod::NaiveSeries,
                terms,
                elapsed: t.elapsed(),
            });
        }
        guard += 2 * excess.ceil() as i64 + 32;
    }
    Err(Error::resource("naive incomplete gamma: tolerance not reached"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::parse_decimal;

    #[test]
    fn exponential() {
        let v = incgamma_naive(&Rational::from(1), &Ball::from_i64(2), 128).unwrap();
        let e = Ball::from_i64(-2).exp(200);
        assert!(v.ball().overlaps(&e));
        assert!(v.ball().rad().le_pow2(-128));
    }

    #[test]
    fn exponential_integral() {
        let v = incgamma_naive(&Rational::from(0), &Ball::one(), 100).unwrap();
        let want = parse_decimal("0.21938393439552027367716377546012164903 +/- 1e-38", 200).unwrap();
        assert!(v.ball().overlaps(&want));
        let v = incgamma_naive(&Rational::from(-2), &Ball::one(), 100).unwrap();
        let want = parse_decimal("0.10969196719776013683858188773006082451 +/- 1e-38", 200).unwrap();
        assert!(v.ball().overlaps(&want));
    }

    #[test]
    fn half_at_one() {
        let v = incgamma_naive(&Rational::from((1, 2)), &Ball::one(), 100).unwrap();
        let want = parse_decimal("0.27880558528066197650 +/- 1e-20", 200).unwrap();
        assert!(v.ball().overlaps(&want));
    }
}
