//! Euler–Maclaurin summation for `ζ(s, a)` and `L(s, χ)`.
//!
//! ```text
//! ζ(s, a) = Σ_{k<N} (k+a)^{−s} + (N+a)^{1−s}/(s−1) + (N+a)^{−s}/2
//!         + Σ_{j=1}^{M} B_{2j}/(2j)! (s)_{2j−1} (N+a)^{−s−2j+1} + R
//! ```
//!
//! with `|R| ≤ 4|(s)_{2M}| / (2π)^{2M} · (N+a)^{1−σ−2M} / (σ+2M−1)`, from
//! `|B̃_{2M}(t)| ≤ |B_{2M}| ≤ 4(2M)!/(2π)^{2M}`.

use std::time::Instant;

use rug::{Integer, Rational};

use super::recurrences::bernoulli_table;
use super::{OracleMethod, OracleResult};
use crate::afe::LValue;
use crate::chars::{char_eval, DirichletChar};
use crate::numcore::{const_pi, Ball, ComplexBall, Mag};
use crate::{Error, Result};

const LN2: f64 = std::f64::consts::LN_2;
const MAX_M: u64 = 20_000;

fn pochhammer(s: &Rational, n: u64) -> Rational {
    let mut r = Rational::from(1);
    for k in 0..n {
        r *= Rational::from(s + k);
    }
    r
}

/// Remainder bound after `M` correction terms.
fn remainder(s: &Rational, x: &Rational, m: u64) -> Result<Mag> {
    let e = Rational::from(s + 2 * m) - 1u32;
    if e <= 0 {
        return Ok(Mag::inf());
    }
    let wp = 64;
    let poch = Ball::from_rational(&pochhammer(s, 2 * m), wp);
    let twopi = const_pi(wp).mul_2exp(1).pow_u64(2 * m, wp);
    let xb = Ball::from_rational(x, wp);
    let xp = xb.pow_rational(&Rational::from(-&e), wp)?;
    Ok(poch
        .mul_i64(4, wp)
        .mul(&xp, wp)
        .div(&twopi, wp)?
        .div(&Ball::from_rational(&e, wp), wp)?
        .mag())
}

/// `ζ(s, a)`, or for `s = 1` the regularized value with `1/(s−1)` removed
/// (that is `−ψ(a)`).
fn em_core(s: &Rational, a: &Rational, p: i64) -> Result<(Ball, u64)> {
    let sig = s.to_f64();
    let pf = p.max(16) as f64;
    let n = (pf * LN2 / (2.0 * std::f64::consts::PI) + s.to_f64().abs()).ceil() as u64 + 2;
    let x = Rational::from(a + n);
    let mut m = ((pf * LN2) / (2.0 * (2.0 * std::f64::consts::PI * n as f64).ln())).ceil() as u64 + 1;
    let target = -p - 3;
    loop {
        if remainder(s, &x, m)?.le_pow2(target) {
            break;
        }
        m += 4;
        if m > MAX_M {
            return Err(Error::resource("Euler–Maclaurin: remainder bound not reached"));
        }
    }
    let rem = remainder(s, &x, m)?;
    let big = ((1.0 - sig).max(0.0) * ((n + 1) as f64).log2()
        + sig.max(0.0) * (1.0 / a.to_f64()).log2())
    .ceil() as i64;
    let wp = (p + big + 2 * (64 - n.leading_zeros() as i64) + 24).max(64) as u32;
    let neg_s = Rational::from(-s);

    let mut sum = Ball::zero();
    for k in 0..n {
        let t = Ball::from_rational(&Rational::from(a + k), wp).pow_rational(&neg_s, wp)?;
        sum = sum.add(&t, wp);
    }
    let xb = Ball::from_rational(&x, wp);
    let xs = xb.pow_rational(&neg_s, wp)?;
    // (N+a)^{1−s}/(s−1), or −log(N+a) at s = 1
    let pole = if *s == 1 {
        xb.ln(wp)?.neg()
    } else {
        let sm1 = Rational::from(s - 1u32);
        xs.mul(&xb, wp).div(&Ball::from_rational(&sm1, wp), wp)?
    };
    sum = sum.add(&pole, wp).add(&xs.mul_2exp(-1), wp);

    // Σ_j B_{2j}/(2j)! (s)_{2j−1} x^{1−2j}: exact coefficients, ball powers
    let b = bernoulli_table(2 * m as usize);
    let mut corr = Ball::zero();
    let mut poch = s.clone(); // (s)_{2j−1}
    let mut fact = Integer::from(2); // (2j)!
    let xr = xb.recip(wp)?;
    let xr2 = xr.sqr(wp);
    let mut xp = xr; // x^{1−2j}
    for j in 1..=m {
        let c = Rational::from(&b[2 * j as usize] * &poch) / &fact;
        corr = corr.add(&xp.mul_rational(&c, wp), wp);
        poch *= Rational::from(s + (2 * j - 1)) * Rational::from(s + 2 * j);
        fact *= (2 * j + 1) * (2 * j + 2);
        xp = xp.mul(&xr2, wp);
    }
    let corr = corr.mul(&xs, wp);
    let v = sum.add(&corr, wp).add_error(&rem);
    Ok((v, n + m))
}

/// `ζ(s, a)` for `a ∈ (0, 1]`, `s ≠ 1`, with absolute error about `2^{−p}`.
pub fn hurwitz_em(s: &Rational, a: &Rational, p: u32) -> Result<OracleResult> {
    if *s == 1 {
        return Err(Error::domain("ζ(s, a) has a pole at s = 1"));
    }
    if *a <= 0 || *a > 1 {
        return Err(Error::precondition("Hurwitz parameter must lie in (0, 1]"));
    }
    let t = Instant::now();
    let (v, terms) = em_core(s, a, p as i64)?;
    Ok(OracleResult {
        value: LValue::Real(v),
        method: OracleMethod::EulerMaclaurin,
        terms,
        elapsed: t.elapsed(),
    })
}

/// `ζ(s)` by Euler–Maclaurin.
pub fn zeta_em(s: &Rational, p: u32) -> Result<OracleResult> {
    hurwitz_em(s, &Rational::from(1), p)
}

/// `L(s, χ) = q^{−s} Σ_{k=1}^{q} χ(k) ζ(s, k/q)` for any `χ`.
pub fn l_em(chi: &DirichletChar, s: &Rational, p: u32) -> Result<OracleResult> {
    let q = chi.modulus();
    if *s == 1 && chi.is_principal() {
        return Err(Error::domain("L(s, χ) has a pole at s = 1 for principal χ"));
    }
    let t = Instant::now();
    let sig = s.to_f64();
    let lq = (q as f64).log2();
    let pk = p as i64 + (lq * (1.0 + (-sig).max(0.0))).ceil() as i64 + 8;
    let wp = (pk + 16) as u32;
    let mut sum = ComplexBall::zero();
    let mut terms = 0;
    for k in 1..=q {
        let Some(c) = char_eval(chi, k) else { continue };
        // at s = 1 the pole parts cancel since Σ χ(k) = 0
        let (z, n) = em_core(s, &Rational::from((k, q)), pk)?;
        terms += n;
        sum = sum.add(&c.to_complex(wp).mul_real(&z, wp), wp);
    }
    let qs = Ball::from_u64(q).pow_rational(&Rational::from(-s), wp)?;
    let v = sum.mul_real(&qs, wp);
    let value = if chi.is_real() {
        LValue::Real(v.re)
    } else {
        LValue::Complex(v)
    };
    Ok(OracleResult {
        value,
        method: OracleMethod::EulerMaclaurin,
        terms,
        elapsed: t.elapsed(),
    })
}
