//! Taylor steps `Γ(a, u) → Γ(a, u + x) = Σ c_n(u) x^n` using the recurrence
//! `u(n+1)(n+2)c_{n+2} + (n+1)(n+1+u−a)c_{n+1} + n c_n = 0`,
//! `c_0 = Γ(a, u)`, `c_1 = −u^{a−1}e^{−u}`.
//!
//! The state `(c_n x^n, c_{n+1} x^n, S_n)` advances by
//! `U_n = [[0, x, 0], [xn/Q, x(n+1)(n+1+u−a)/Q, 0], [1, 0, 1]]`,
//! `Q = −u(n+1)(n+2)`, so `S_N = P₃₁ c_0 + P₃₂ c_1` for `P = U_{N−1}⋯U_0`.

use rug::{Float, Integer, Rational};

use super::{dyadic_parts, log2_abs, geometric_factor, term_cap_error, LOG2_E, MAX_TERMS};
use crate::binsplit::{bsplit_product, RatMatrix};
use crate::numcore::{Ball, Mag, MAG_PREC};
use crate::{Error, Result};

fn taylor_factor(a: &Rational, u: &Float, x: &Float) -> impl Fn(u64) -> RatMatrix + Sync {
    let (un, f) = dyadic_parts(u);
    let (xn, g) = dyadic_parts(x);
    let (an, ad) = (a.numer().clone(), a.denom().clone());
    let b2f = Integer::from(&ad << f);
    let xbu = Integer::from(&xn * &ad) * &un;
    let bu2g = Integer::from(&ad * &un) << g;
    let mx2fb = -Integer::from(&xn * &b2f);
    // U·B − A·2^f
    let k = Integer::from(&un * &ad) - (an << f);
    let mx = Integer::from(-&xn);
    move |n: u64| {
        let nn = Integer::from(n + 1) * (n + 2);
        let den = Integer::from(&bu2g * &nn);
        let e12 = Integer::from(&xbu * &nn);
        let e21 = Integer::from(&mx2fb * n);
        let e22 = Integer::from(&mx * (n + 1)) * (Integer::from(&b2f * (n + 1)) + &k);
        RatMatrix::from_integers(
            3,
            vec![
                Integer::new(),
                e12,
                Integer::new(),
                e21,
                e22,
                Integer::new(),
                den.clone(),
                Integer::new(),
                den.clone(),
            ],
            den,
        )
    }
}

/// `P = U_{N−1} ⋯ U_0` for the Taylor step from `u` by `x`.
pub fn taylor_partial_matrix(a: &Rational, u: &Float, x: &Float, n: u64) -> Result<RatMatrix> {
    if n == 0 {
        return Ok(RatMatrix::identity(3));
    }
    bsplit_product(&taylor_factor(a, u, x), 0, n)
}

/// log₂ of `M_R(u) = max_{|t−u|=R} |t^{a−1} e^{−t}|` (f64 estimate).
fn log2_m_r(af: f64, uf: f64, r: f64) -> f64 {
    let base = if af >= 1.0 { uf + r } else { uf - r };
    (af - 1.0) * base.log2() - (uf - r) * LOG2_E
}

/// Chooses the Cauchy radius `R` (starting at `(u+|x|)/2` and halving) and
/// the smallest `N` with tail bound below `2^{−tol_bits}`; `None` if no
/// admissible `R` exists.
pub fn choose_taylor_radius(
    a: &Rational,
    u: &Float,
    x: &Float,
    tol_bits: i64,
) -> Option<(Float, u64)> {
    let af = a.to_f64();
    let uf = u.to_f64();
    let ax = Float::with_val(x.prec(), x.abs_ref());
    let xf = ax.to_f64();
    let lx = log2_abs(&ax);
    if uf.is_nan() || uf <= 0.0 || ax.is_zero() || ax >= *u {
        return None;
    }
    let target = tol_bits as f64 + 3.0;
    let mut best: Option<(Float, u64)> = None;
    let mut r = (uf + xf) / 2.0;
    for _ in 0..=40 {
        let rf = Float::with_val(53, r);
        if rf <= ax || rf >= *u {
            break;
        }
        let lc = lx - r.log2();
        let k = r.log2() + log2_m_r(af, uf, r) - (-lc.exp2()).ln_1p() * LOG2_E + target;
        let ok = |n: u64| k - (n as f64).log2() + n as f64 * lc <= 0.0;
        let mut n = ((k / -lc).ceil().max(1.0)).min(MAX_TERMS as f64 * 2.0) as u64;
        while n > 1 && ok(n - 1) {
            n -= 1;
        }
        while !ok(n) && n <= MAX_TERMS {
            n += 1;
        }
        if best.as_ref().is_none_or(|b| n < b.1) {
            best = Some((rf, n));
        }
        r /= 2.0;
    }
    best
}

/// `R·M_R(u)/N · C^N/(1 − C)`, `C = |x|/R`, bounding `|Σ_{n≥N} c_n(u) x^n|`.
/// Infinite unless `|x| < R < u`.
pub fn taylor_tail_bound(a: &Rational, u: &Float, x: &Float, n: u64, r: &Float) -> Result<Mag> {
    if n == 0 {
        return Err(Error::precondition("Taylor tail bound needs N ≥ 1"));
    }
    let ax = Float::with_val(x.prec(), x.abs_ref());
    if *r >= *u || ax >= *r || *r <= 0 {
        return Ok(Mag::inf());
    }
    let wp = 2 * MAG_PREC;
    let ub = Ball::exact(u.clone());
    let rb = Ball::exact(r.clone());
    let am1 = Rational::from(a - 1u32);
    let base = if am1 >= 0 { ub.add(&rb, wp) } else { ub.sub(&rb, wp) };
    let pw = base.pow_rational(&am1, wp)?.mag();
    let ex = rb.sub(&ub, wp).exp(wp).mag();
    let m = pw.mul(&ex);
    let c = Mag::from_abs(x).div_lower(r);
    let nn = u32::try_from(n).map_err(|_| term_cap_error("Taylor step"))?;
    Ok(Mag::from_abs(r)
        .mul(&m)
        .div_lower(&Float::with_val(64, n))
        .mul(&c.pow_u(nn))
        .mul(&geometric_factor(&c)))
}

/// `Γ(a, u + x)` from an enclosure `y_u` of `Γ(a, u)`; requires `0 < |x| < u`
/// (returns `y_u` for `x = 0`).
pub fn taylor_step(a: &Rational, u: &Float, y_u: &Ball, x: &Float, tol_bits: i64) -> Result<Ball> {
    taylor_step_info(a, u, y_u, x, tol_bits).map(|r| r.0)
}

pub(crate) fn taylor_step_info(
    a: &Rational,
    u: &Float,
    y_u: &Ball,
    x: &Float,
    tol_bits: i64,
) -> Result<(Ball, u64, Mag)> {
    if x.is_zero() {
        return Ok((y_u.clone(), 0, Mag::zero()));
    }
    let (r, n) = choose_taylor_radius(a, u, x, tol_bits)
        .ok_or_else(|| Error::precondition("Taylor step needs 0 < |x| < u"))?;
    if n > MAX_TERMS {
        return Err(term_cap_error("Taylor step"));
    }
    let tail = taylor_tail_bound(a, u, x, n, &r)?;
    let lm = log2_m_r(a.to_f64(), u.to_f64(), r.to_f64()) + r.to_f64().log2();
    let lmag = y_u.mag().log2_approx().max(lm).max(0.0);
    let wp = (tol_bits + lmag.ceil() as i64 + 64 - n.leading_zeros() as i64 + 24).max(64) as u32;

    let p = taylor_partial_matrix(a, u, x, n)?;
    let ub = Ball::exact(u.clone());
    let am1 = Rational::from(a - 1u32);
    let yp = ub
        .pow_rational(&am1, wp)?
        .mul(&ub.neg().exp(wp), wp)
        .neg();
    let v = p
        .entry_ball(2, 0, wp)
        .mul(y_u, wp)
        .add(&p.entry_ball(2, 1, wp).mul(&yp, wp), wp)
        .add_error(&tail);
    Ok((v, n, tail))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_step_is_identity() {
        let y = Ball::from_i64(3);
        let u = Float::with_val(64, 2);
        let v = taylor_step(&Rational::from(1), &u, &y, &Float::new(64), 64).unwrap();
        assert!(v.is_exact() && v.mid() == y.mid());
    }

    #[test]
    fn exponential_step() {
        // Γ(1, z) = e^{−z}
        let u = Float::with_val(64, 1);
        let x = Float::with_val(64, 0.5);
        let y = Ball::from_i64(-1).exp(200);
        let v = taylor_step(&Rational::from(1), &u, &y, &x, 150).unwrap();
        let want = Ball::from_rational(&Rational::from((-3, 2)), 200).exp(200);
        assert!(v.overlaps(&want));
        assert!(v.rad().le_pow2(-140));
    }

    #[test]
    fn step_too_large() {
        let u = Float::with_val(64, 1);
        let x = Float::with_val(64, 1);
        let y = Ball::one();
        assert!(matches!(
            taylor_step(&Rational::from(1), &u, &y, &x, 64),
            Err(Error::Precondition(_))
        ));
    }
}
