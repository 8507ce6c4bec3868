//! `ζ(1/2)` from Ramanujan's identity, for `αβ = 4π³`:
//!
//! ```text
//! Σ 1/(e^{n²α} − 1) = π²/(6α) + 1/4 + √β/(4π) [ζ(1/2) + Σ T_n],
//! T_n = (cos x_n − sin x_n − e^{−x_n}) / (√n (cosh x_n − cos x_n)),  x_n = √(nβ).
//! ```
//!
//! Tails: `Σ_{n≥N} 1/(e^{n²α}−1) ≤ e^{−N²α}/((1−e^{−α})(1−e^{−N²α}))`, and
//! since `cosh x − cos x ≥ e^x/2 − 1`, for `x_M ≥ 2`
//! `Σ_{n≥M} |T_n| ≤ 2(√2+1)/(√M(1−2e^{−x_M})) · e^{−x_M}(1 + 2(1+x_M)/β)`.

use std::time::Instant;

use rug::Rational;

use super::{OracleMethod, OracleResult};
use crate::afe::LValue;
use crate::numcore::{const_pi, Ball, Mag};
use crate::Result;

const LN2: f64 = std::f64::consts::LN_2;
/// `α = c/p`.
pub const DEFAULT_C: u32 = 36;

fn left_tail(alpha: &Ball, n: u64, w: u32) -> Result<Mag> {
    let n2a = alpha.mul(&Ball::from_u64(n * n), w);
    let e = n2a.neg().exp(w);
    let d1 = Ball::one().sub(&alpha.neg().exp(w), w);
    let d2 = Ball::one().sub(&e, w);
    Ok(e.div(&d1.mul(&d2, w), w)?.mag())
}

fn right_tail(beta: &Ball, m: u64, w: u32) -> Result<Mag> {
    let x = beta.mul(&Ball::from_u64(m), w).sqrt(w)?;
    let ex = x.neg().exp(w);
    let one = Ball::one();
    let k = Ball::from_i64(2)
        .sqrt(w)?
        .add(&one, w)
        .mul_i64(2, w)
        .div(
            &Ball::from_u64(m).sqrt(w)?.mul(&one.sub(&ex.mul_i64(2, w), w), w),
            w,
        )?;
    let f = one.add(&one.add(&x, w).mul_i64(2, w).div(beta, w)?, w);
    Ok(k.mul(&ex, w).mul(&f, w).mag())
}

/// `ζ(1/2)` with `α = c/p`.
pub fn ramanujan_zeta_half_with(p: u32, c: u32) -> Result<OracleResult> {
    let t = Instant::now();
    let p = p.max(16);
    let alpha_q = Rational::from((c.max(1), p));
    let pf = p as f64;
    let af = alpha_q.to_f64();
    let target = -(p as i64) - 6;
    let tl = (pf + 8.0) * LN2;
    let n_guess = (tl / af).sqrt().ceil() as u64 + 1;
    let bf = 4.0 * std::f64::consts::PI.powi(3) / af;
    let m_guess = (tl * tl / bf).ceil() as u64 + 1;
    let lg = 64 - (n_guess + m_guess).leading_zeros();
    let wp = p + 2 * lg + 32 + (1.0 / af).log2().ceil() as u32;

    let pi = const_pi(wp);
    let alpha = Ball::from_rational(&alpha_q, wp);
    let beta = pi.pow_u64(3, wp).mul_i64(4, wp).div(&alpha, wp)?;
    let sqb = beta.sqrt(wp)?;
    // scale applied to the left-hand tail: 4π/√β
    let scale = pi.mul_i64(4, wp).div(&sqb, wp)?;

    let w = 64;
    let mut n = n_guess.saturating_sub(4).max(1);
    while !left_tail(&alpha, n, w)?.mul(&scale.mag()).le_pow2(target) {
        n += 1;
    }
    let mut m = m_guess.saturating_sub(4).max(1);
    loop {
        let x = (bf * m as f64).sqrt();
        if x >= 2.0 && right_tail(&beta, m, w)?.le_pow2(target) {
            break;
        }
        m += 1;
    }

    let one = Ball::one();
    let mut left = Ball::zero();
    for k in 1..n {
        let e = alpha.mul(&Ball::from_u64(k * k), wp).exp(wp);
        left = left.add(&e.sub(&one, wp).recip(wp)?, wp);
    }
    left = left.add_error(&left_tail(&alpha, n, w)?);

    let mut right = Ball::zero();
    for k in 1..m {
        let x = beta.mul(&Ball::from_u64(k), wp).sqrt(wp)?;
        let (c, s) = (x.cos(wp), x.sin(wp));
        let num = c.sub(&s, wp).sub(&x.neg().exp(wp), wp);
        let den = Ball::from_u64(k).sqrt(wp)?.mul(&x.cosh(wp).sub(&c, wp), wp);
        right = right.add(&num.div(&den, wp)?, wp);
    }
    right = right.add_error(&right_tail(&beta, m, w)?);

    // ζ(1/2) = (4π/√β)(left − π²/(6α) − 1/4) − right
    let main = pi
        .sqr(wp)
        .div(&alpha.mul_i64(6, wp), wp)?
        .add(&Ball::from_rational(&Rational::from((1, 4)), wp), wp);
    let v = scale.mul(&left.sub(&main, wp), wp).sub(&right, wp);
    Ok(OracleResult {
        value: LValue::Real(v),
        method: OracleMethod::Ramanujan,
        terms: n + m - 2,
        elapsed: t.elapsed(),
    })
}

/// `ζ(1/2)` by Ramanujan's formula with the default `α = 36/p`.
pub fn ramanujan_zeta_half(p: u32) -> Result<OracleResult> {
    ramanujan_zeta_half_with(p, DEFAULT_C)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::parse_decimal;

    #[test]
    fn begins_correctly() {
        let want = parse_decimal("-1.4603545088095868128894991525152980125 +/- 1e-37", 200).unwrap();
        let a = ramanujan_zeta_half(64).unwrap();
        let b = ramanujan_zeta_half(128).unwrap();
        assert!(a.ball().overlaps(&want) && b.ball().overlaps(&want));
        assert!(a.ball().contains(b.ball()) || a.ball().overlaps(b.ball()));
        assert!(b.ball().rad().le_pow2(-120));
    }

    #[test]
    fn alpha_is_free() {
        let a = ramanujan_zeta_half_with(100, 5).unwrap();
        let b = ramanujan_zeta_half_with(100, 80).unwrap();
        assert!(a.ball().overlaps(b.ball()));
    }
}
