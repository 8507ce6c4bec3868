//! Exact Bernoulli and Euler numbers from L-values, and the Landau–Ramanujan
//! constant.
//!
//! ```text
//! B_{2n} = (−1)^{n+1} 2 (2n)! ζ(2n) / (2π)^{2n}
//! E_{2n} = (−1)^n 4^{n+1} (2n)! β(2n+1) / π^{2n+1}
//! ```
//!
//! The denominator of `B_n` is `∏_{(p−1) | n} p` (von Staudt–Clausen), so
//! `d·B_n` and `E_n` are integers recovered from balls containing exactly one
//! integer.

use std::time::{Duration, Instant};

use rug::{Integer, Rational};

use crate::afe::{afe_eval, LValueRequest};
use crate::chars::{divisors, DirichletChar};
use crate::incgamma::ln_gamma_f64;
use crate::numcore::{const_pi, Ball, Mag};
use crate::oracles::zeta_euler_product;
use crate::{Error, Result};

const LOG2_E: f64 = std::f64::consts::LOG2_E;

/// How the L-values are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExactMethod {
    /// Approximate functional equation.
    #[default]
    Afe,
    /// Truncated Euler product.
    EulerProduct,
}

#[derive(Debug, Clone)]
pub struct ExactNumberResult {
    pub n: u64,
    /// Exact value; Euler numbers have denominator 1.
    pub value: Rational,
    /// Decimal digits in the absolute value of the numerator.
    pub numerator_digits: usize,
    /// Working precision of the final (successful) L-value.
    pub bits: u32,
    pub elapsed: Duration,
}

fn digits(n: &Integer) -> usize {
    if *n == 0 {
        1
    } else {
        Integer::from(n.abs_ref()).to_string().len()
    }
}

fn trivial_result(n: u64, v: Rational, t: Instant) -> ExactNumberResult {
    let numerator_digits = digits(v.numer());
    ExactNumberResult {
        n,
        value: v,
        numerator_digits,
        bits: 0,
        elapsed: t.elapsed(),
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// `∏_{(p−1) | n} p` for even `n ≥ 2`.
pub fn staudt_denominator(n: u64) -> Integer {
    let mut d = Integer::from(1);
    for k in divisors(n) {
        if is_prime(k + 1) {
            d *= k + 1;
        }
    }
    d
}

fn l_value(chi: DirichletChar, s: u64, bits: u32, method: ExactMethod) -> Result<Ball> {
    let s = Rational::from(s);
    let v = match method {
        ExactMethod::Afe => afe_eval(&LValueRequest::new(chi, s, bits))?,
        ExactMethod::EulerProduct => zeta_euler_product(&s, &chi, bits)?.value,
    };
    v.real()
        .cloned()
        .ok_or_else(|| Error::precondition("expected a real L-value"))
}

/// Recovers the unique integer in `f(bits)`, retrying once with 64 more bits.
fn round_unique<F>(bits: u32, f: F) -> Result<(Integer, u32)>
where
    F: Fn(u32) -> Result<Ball>,
{
    for extra in [0u32, 64] {
        let b = bits + extra;
        if let Some(k) = f(b)?.unique_integer() {
            return Ok((k, b));
        }
    }
    Err(Error::resource("ball does not isolate a unique integer"))
}

/// `B_n` as an exact fraction (`B_1 = −1/2`).
pub fn bernoulli_exact(n: u64) -> Result<Rational> {
    bernoulli_exact_with(n, ExactMethod::Afe).map(|r| r.value)
}

pub fn bernoulli_exact_with(n: u64, method: ExactMethod) -> Result<ExactNumberResult> {
    let t = Instant::now();
    match n {
        0 => return Ok(trivial_result(0, Rational::from(1), t)),
        1 => return Ok(trivial_result(1, Rational::from((-1, 2)), t)),
        _ if n % 2 == 1 => return Ok(trivial_result(n, Rational::new(), t)),
        _ => {}
    }
    let d = staudt_denominator(n);
    // log₂ |d B_n| ≤ log₂ d + log₂(2 n!) − n log₂(2π) + 1
    let nf = n as f64;
    let lb = d.significant_bits() as f64 + 1.0 + ln_gamma_f64(nf + 1.0) * LOG2_E
        - nf * (2.0 * std::f64::consts::PI).log2()
        + 1.0;
    let bits = lb.max(0.0).ceil() as u32 + 32;
    let fact = Integer::from(Integer::factorial(n as u32));
    let (k, used) = round_unique(bits, |b| {
        let wp = b + 2 * (64 - n.leading_zeros()) + 16;
        let z = l_value(DirichletChar::trivial(), n, wp, method)?;
        let twopi_n = const_pi(wp).mul_2exp(1).pow_u64(n, wp);
        let v = Ball::from_integer(&(Integer::from(&fact * &d) << 1u32), wp)
            .mul(&z, wp)
            .div(&twopi_n, wp)?;
        Ok(if (n / 2).is_multiple_of(2) { v.neg() } else { v })
    })?;
    let value = Rational::from((k, d));
    Ok(ExactNumberResult {
        n,
        numerator_digits: digits(value.numer()),
        value,
        bits: used,
        elapsed: t.elapsed(),
    })
}

/// `E_n` as an exact integer.
pub fn euler_exact(n: u64) -> Result<Integer> {
    euler_exact_with(n, ExactMethod::Afe).map(|r| r.value.numer().clone())
}

pub fn euler_exact_with(n: u64, method: ExactMethod) -> Result<ExactNumberResult> {
    let t = Instant::now();
    if n == 0 {
        return Ok(trivial_result(0, Rational::from(1), t));
    }
    if n % 2 == 1 {
        return Ok(trivial_result(n, Rational::new(), t));
    }
    // log₂ |E_n| ≤ (n+2) + log₂ n! − (n+1) log₂ π
    let nf = n as f64;
    let lb = (nf + 2.0) + ln_gamma_f64(nf + 1.0) * LOG2_E
        - (nf + 1.0) * std::f64::consts::PI.log2()
        + 1.0;
    let bits = lb.max(0.0).ceil() as u32 + 32;
    let fact = Integer::from(Integer::factorial(n as u32));
    let chi = DirichletChar::new(4, 3)?;
    let (k, used) = round_unique(bits, |b| {
        let wp = b + 2 * (64 - n.leading_zeros()) + 16;
        let beta = l_value(chi.clone(), n + 1, wp, method)?;
        let pi_n = const_pi(wp).pow_u64(n + 1, wp);
        let v = Ball::from_integer(&(Integer::from(&fact) << (n as u32 + 2)), wp)
            .mul(&beta, wp)
            .div(&pi_n, wp)?;
        Ok(if (n / 2) % 2 == 1 { v.neg() } else { v })
    })?;
    let numerator_digits = digits(&k);
    Ok(ExactNumberResult {
        n,
        value: Rational::from(k),
        numerator_digits,
        bits: used,
        elapsed: t.elapsed(),
    })
}

/// Upper bound `5·3^{−2^{K+1}}/2^{K+2}` on `log` of the omitted factors
/// `n > K ≥ 1` of the product for `λ`.
fn lr_tail(k: u32) -> Mag {
    // log₂ of the bound; 3^{−2^{K+1}} = 2^{−2^{K+1} log₂ 3}
    let e = (2f64.powi(k as i32 + 1) * 3f64.log2()).floor() as i64;
    Mag::from_u64(5).mul_2exp(-e - (k as i64 + 2))
}

/// `λ = 2^{−1/2} ∏_{n≥1} [(1 − 2^{−2^n}) ζ(2^n)/β(2^n)]^{1/2^{n+1}}`.
///
/// Each factor lies in `[1, e^{5·3^{−2^n}/2}]` for `n ≥ 2` since
/// `ζ(m)(1 − 2^{−m}) = Σ_{k odd} k^{−m}`; the truncated product is widened
/// accordingly.
pub fn landau_ramanujan(p: u32) -> Result<Ball> {
    let p = p.max(16);
    let mut k = 1u32;
    while !lr_tail(k).le_pow2(-(p as i64) - 4) {
        k += 1;
    }
    landau_ramanujan_depth(p, k)
}

/// The product truncated after `K` factors, with the tail bound added.
pub fn landau_ramanujan_depth(p: u32, k: u32) -> Result<Ball> {
    if k == 0 || k > 40 {
        return Err(Error::precondition("depth must be in 1..=40"));
    }
    let wp = p.max(16) + 32 + 2 * k;
    let beta = DirichletChar::new(4, 3)?;
    let mut log_sum = Ball::zero();
    for n in 1..=k {
        let m = 1u64 << n;
        let s = Rational::from(m);
        let z = afe_eval(&LValueRequest::new(DirichletChar::trivial(), s.clone(), wp))?;
        let b = afe_eval(&LValueRequest::new(beta.clone(), s, wp))?;
        let z = z.real().cloned().unwrap();
        let b = b.real().cloned().unwrap();
        let two = Ball::one().sub(&Ball::one().mul_2exp(-(m as i32)), wp);
        let f = two.mul(&z, wp).div(&b, wp)?;
        log_sum = log_sum.add(&f.ln(wp)?.mul_2exp(-(n as i32 + 1)), wp);
    }
    // λ = exp(Σ log f_n / 2^{n+1} − log 2 / 2)
    let half_ln2 = Ball::from_i64(2).ln(wp)?.mul_2exp(-1);
    let lo = log_sum.sub(&half_ln2, wp);
    let tail = lr_tail(k);
    // the omitted logarithms lie in [0, tail]
    let shifted = lo.add(&Ball::zero_with_rad(tail.mul_2exp(-1)), wp);
    let shifted = shifted.add(&Ball::exact(tail.as_float().clone()).mul_2exp(-1), wp);
    Ok(shifted.exp(wp).round(p + 16))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{bernoulli_table, euler_table};

    #[test]
    fn small_values() {
        assert_eq!(bernoulli_exact(2).unwrap(), Rational::from((1, 6)));
        assert_eq!(bernoulli_exact(12).unwrap(), Rational::from((-691, 2730)));
        assert_eq!(bernoulli_exact(1).unwrap(), Rational::from((-1, 2)));
        assert_eq!(bernoulli_exact(7).unwrap(), 0);
        assert_eq!(euler_exact(0).unwrap(), 1);
        assert_eq!(euler_exact(2).unwrap(), -1);
        assert_eq!(euler_exact(4).unwrap(), 5);
        assert_eq!(euler_exact(5).unwrap(), 0);
    }

    #[test]
    fn sixty() {
        let b = bernoulli_table(60);
        let e = euler_table(60);
        assert_eq!(bernoulli_exact(60).unwrap(), b[60]);
        assert_eq!(euler_exact(60).unwrap(), e[60]);
        let r = bernoulli_exact_with(60, ExactMethod::EulerProduct).unwrap();
        assert_eq!(r.value, b[60]);
        let r = euler_exact_with(60, ExactMethod::EulerProduct).unwrap();
        assert_eq!(r.value, Rational::from(e[60].clone()));
    }

    #[test]
    fn staudt() {
        assert_eq!(staudt_denominator(12), 2730);
        assert_eq!(staudt_denominator(2), 6);
    }

    #[test]
    fn landau_ramanujan_prefix() {
        let a = landau_ramanujan(64).unwrap();
        let b = landau_ramanujan(256).unwrap();
        assert!(a.overlaps(&b));
        let want = crate::numcore::parse_decimal(
            "0.76422365358922066299069873125009232811679054139340951472 +/- 1e-55",
            256,
        )
        .unwrap();
        assert!(b.overlaps(&want));
        assert!(b.rad().le_pow2(-250));
    }
}
