//! Series at the origin: `Γ(a, x) = Γ(a) − (x^a e^{−x}/a) Σ x^n/(a+1)_n`,
//! and the limit formula at `a = −n`.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::{
    dyadic_parts, geometric_factor, ln_gamma_f64, log2_add, nonpositive_integer,
    rational_abs_lower, term_cap_error, LOG2_E, MAX_TERMS,
};
use crate::afe::gamma_rational;
use crate::binsplit::{bsplit_product, RatMatrix};
use crate::numcore::{const_euler, Ball, Mag};
use crate::{Error, Result};

/// `U_n = [[x/(a+n+1), 0], [1, 1]]` over a common denominator.
fn hyp_factor(a: &Rational, xn: &Integer, g: u32) -> impl Fn(u64) -> RatMatrix + Sync {
    let (an, ad) = (a.numer().clone(), a.denom().clone());
    let num = Integer::from(xn * &ad);
    move |n: u64| {
        let den = (Integer::from(&ad * (n + 1)) + &an) << g;
        RatMatrix::from_integers(
            2,
            vec![num.clone(), Integer::new(), den.clone(), den.clone()],
            den,
        )
    }
}

/// `Σ_{n<N} x^n/(a+1)_n` exactly, and `x^N/(a+1)_N`.
fn hyp_product(a: &Rational, x: &Float, n: u64) -> Result<RatMatrix> {
    let (xn, g) = dyadic_parts(x);
    bsplit_product(&hyp_factor(a, &xn, g), 0, n)
}

/// The exact partial sum `Σ_{n<N} x^n/(a+1)_n`.
pub fn hyp_origin_partial_sum(a: &Rational, x: &Float, n: u64) -> Result<Rational> {
    if n == 0 {
        return Ok(Rational::new());
    }
    Ok(hyp_product(a, x, n)?.entry(1, 0))
}

/// Bound `|x|^N/|(a+1)_N| · 1/(1 − C)`, `C = |x|/|a+N+1|`, on the tail of
/// `Σ x^n/(a+1)_n` from `n = N`. Infinite when `N ≤ −a−1` or `C ≥ 1`.
pub fn hyp_origin_tail_bound(a: &Rational, x: &Float, n: u64) -> Result<Mag> {
    let p = if n == 0 {
        RatMatrix::identity(2)
    } else {
        hyp_product(a, x, n)?
    };
    Ok(hyp_tail_from_product(a, x, n, &p))
}

fn hyp_tail_from_product(a: &Rational, x: &Float, n: u64, p: &RatMatrix) -> Mag {
    let shifted = Rational::from(a + (n + 1));
    if Rational::from(a + n) <= -1 || shifted == 0 {
        return Mag::inf();
    }
    let c = Mag::from_abs(x).div_lower(&rational_abs_lower(&shifted));
    let term = if n == 0 {
        Mag::from_u64(1)
    } else {
        p.entry_ball(0, 0, 64).mag()
    };
    term.mul(&geometric_factor(&c))
}

/// Term count and magnitude (log₂ Σ|t_n|) for the series at the origin.
fn plan_hyp(a: &Rational, x: &Float, target_log2: f64) -> Result<(u64, f64)> {
    let af = a.to_f64();
    let xf = x.to_f64();
    let lx = xf.log2();
    let mut lt = 0.0f64; // log₂ |x^n/(a+1)_n|
    let mut ls = f64::NEG_INFINITY;
    let mut n = 0u64;
    loop {
        let next = af + n as f64 + 1.0;
        if n as f64 > -af - 1.0 && next > xf {
            let c = xf / next;
            if lt - (1.0 - c).log2() <= target_log2 {
                return Ok((n.max(1), ls));
            }
        }
        ls = log2_add(ls, lt);
        lt += lx - next.abs().log2();
        n += 1;
        if n > MAX_TERMS {
            return Err(term_cap_error("series at the origin"));
        }
    }
}

/// `γ(a, x) = (x^a e^{−x}/a) Σ x^n/(a+1)_n` (for `a ∉ {0, −1, …}`),
/// with absolute error about `2^{−tol_bits}`.
pub fn lower_gamma(a: &Rational, x: &Float, tol_bits: i64) -> Result<Ball> {
    lower_gamma_info(a, x, tol_bits).map(|r| r.0)
}

pub(crate) fn lower_gamma_info(a: &Rational, x: &Float, tol_bits: i64) -> Result<(Ball, u64, Mag)> {
    if nonpositive_integer(a).is_some() {
        return Err(Error::domain("series at the origin needs a ∉ {0, −1, −2, …}"));
    }
    if !(x.is_finite() && *x > 0) {
        return Err(Error::precondition("series at the origin needs x > 0"));
    }
    let af = a.to_f64();
    let xf = x.to_f64();
    let lpref = (af * xf.log2() - xf * LOG2_E - af.abs().log2()).max(-1e300);
    let (n, ls) = plan_hyp(a, x, -(tol_bits as f64) - 4.0 - lpref)?;
    let mag = (lpref + ls).max(0.0).ceil() as i64;
    let wp = (tol_bits + mag + 64 - (n.leading_zeros() as i64) + 24).max(64) as u32;

    let p = hyp_product(a, x, n)?;
    let tail = hyp_tail_from_product(a, x, n, &p);
    let sum = p.entry_ball(1, 0, wp).add_error(&tail);
    let xb = Ball::exact(x.clone());
    let pref = xb
        .pow_rational(a, wp)?
        .mul(&xb.neg().exp(wp), wp)
        .div(&Ball::from_rational(a, wp), wp)?;
    let v = pref.mul(&sum, wp);
    let tail_abs = pref.mag().mul(&tail);
    Ok((v, n, tail_abs))
}

/// `Γ(a, x) = Γ(a) − γ(a, x)` for `a ∉ {0, −1, −2, …}` and dyadic `x > 0`.
pub fn hyp_series_origin(a: &Rational, x: &Float, tol_bits: i64) -> Result<Ball> {
    hyp_info(a, x, tol_bits).map(|r| r.0)
}

pub(crate) fn hyp_info(a: &Rational, x: &Float, tol_bits: i64) -> Result<(Ball, u64, Mag)> {
    let (low, n, tail) = lower_gamma_info(a, x, tol_bits + 1)?;
    let lg = ln_gamma_f64(a.to_f64()) * LOG2_E;
    let rel = (tol_bits + 3 + lg.max(0.0).ceil() as i64).max(16) as u32;
    let g = gamma_rational(a, rel)?;
    let wp = rel.max(low.prec()) + 8;
    Ok((g.sub(&low, wp), n, tail))
}

/// `t_{n+1+j+1}/t_{n+1+j} = −x(j+1)/((n+2+j)(j+2))` for the infinite part
/// `Σ_{k>n} (−x)^k/(k!(k−n))`.
fn singular_factor(n: u64, xn: &Integer, g: u32) -> impl Fn(u64) -> RatMatrix + Sync {
    let mx = Integer::from(-xn);
    move |j: u64| {
        let num = Integer::from(&mx * (j + 1));
        let den = (Integer::from(n + 2 + j) * (j + 2)) << g;
        RatMatrix::from_integers(2, vec![num, Integer::new(), den.clone(), den.clone()], den)
    }
}

fn singular_product(n: u64, x: &Float, terms: u64) -> Result<RatMatrix> {
    let (xn, g) = dyadic_parts(x);
    bsplit_product(&singular_factor(n, &xn, g), 0, terms)
}

/// `t_{n+1} = (−x)^{n+1}/(n+1)!` exactly.
fn singular_first_term(n: u64, x: &Float) -> Rational {
    let xr = x.to_rational().expect("finite");
    let p = (-xr).pow(n as i32 + 1);
    let f = Integer::from(Integer::factorial(n as u32 + 1));
    p / f
}

/// Exact partial sum `Σ_{k=n+1}^{n+N} (−x)^k/(k!(k−n))` of the infinite part.
pub fn singular_partial_sum(n: u64, x: &Float, terms: u64) -> Result<Rational> {
    if terms == 0 {
        return Ok(Rational::new());
    }
    let p = singular_product(n, x, terms)?;
    Ok(p.entry(1, 0) * singular_first_term(n, x))
}

/// Bound on `|Σ_{k>n+N} (−x)^k/(k!(k−n))|`: `|t_{n+1+N}|/(1 − C)`, `C = x/(n+2+N)`.
pub fn singular_tail_bound(n: u64, x: &Float, terms: u64) -> Result<Mag> {
    let p = if terms == 0 {
        RatMatrix::identity(2)
    } else {
        singular_product(n, x, terms)?
    };
    Ok(singular_tail_from_product(n, x, terms, &p))
}

fn singular_tail_from_product(n: u64, x: &Float, terms: u64, p: &RatMatrix) -> Mag {
    let t0 = Ball::from_rational(&singular_first_term(n, x), 64).mag();
    let ratio = if terms == 0 {
        Mag::from_u64(1)
    } else {
        p.entry_ball(0, 0, 64).mag()
    };
    let c = Mag::from_abs(x).div_lower(&Float::with_val(64, n + 2 + terms));
    t0.mul(&ratio).mul(&geometric_factor(&c))
}

/// `Γ(−n, x) = (−1)^n/n! (ψ(n+1) − log x) − x^{−n} (Σ_{k<n} + Σ_{k>n}) (−x)^k/(k!(k−n))`.
pub fn singular_at_nonpositive_int(n: u64, x: &Float, tol_bits: i64) -> Result<Ball> {
    singular_info(n, x, tol_bits).map(|r| r.0)
}

pub(crate) fn singular_info(n: u64, x: &Float, tol_bits: i64) -> Result<(Ball, u64, Mag)> {
    if !(x.is_finite() && *x > 0) {
        return Err(Error::precondition("singular formula needs x > 0"));
    }
    let nf = n as f64;
    let xf = x.to_f64();
    let lx = xf.log2();
    let lscale = -nf * lx;
    // term scan for the infinite part, k = n+1, n+2, …
    let mut lt = (nf + 1.0) * lx - ln_gamma_f64(nf + 2.0) * LOG2_E;
    let mut ls = f64::NEG_INFINITY;
    let mut terms = 0u64;
    let target = -(tol_bits as f64) - 4.0 - lscale;
    loop {
        let next = nf + 2.0 + terms as f64;
        if next > xf && lt - (1.0 - xf / next).log2() <= target {
            break;
        }
        ls = log2_add(ls, lt);
        lt += lx + (terms as f64 + 1.0).log2() - next.log2() - (terms as f64 + 2.0).log2();
        terms += 1;
        if terms > MAX_TERMS {
            return Err(term_cap_error("singular series"));
        }
    }
    let terms = terms.max(1);
    // the finite part is at most e^x x^{−n}
    let lfin = xf * LOG2_E + lscale;
    let mag = (ls + lscale).max(lfin).max(lx.abs().log2()).max(0.0).ceil() as i64;
    let wp = (tol_bits + mag + 64 - terms.leading_zeros() as i64 + 24).max(64) as u32;

    let p = singular_product(n, x, terms)?;
    let tail = singular_tail_from_product(n, x, terms, &p);
    let t0 = Ball::from_rational(&singular_first_term(n, x), wp);
    let inf_part = p.entry_ball(1, 0, wp).mul(&t0, wp).add_error(&tail);

    let xr = x.to_rational().expect("finite");
    let mut fin = Rational::new();
    let mut pw = Rational::from(1);
    let mut fact = Integer::from(1);
    for k in 0..n {
        if k > 0 {
            pw *= Rational::from(-&xr);
            fact *= k;
        }
        let den = Integer::from(&fact * (k as i64 - n as i64));
        fin += Rational::from(&pw / den);
    }
    let xb = Ball::exact(x.clone());
    let xmn = xb.pow_i64(-(n as i64), wp)?;
    let series = inf_part
        .add(&Ball::from_rational(&fin, wp), wp)
        .mul(&xmn, wp);

    let harmonic: Rational = (1..=n).map(|k| Rational::from((1, k))).sum();
    let psi = Ball::from_rational(&harmonic, wp).sub(&const_euler(wp), wp);
    let lead = psi
        .sub(&xb.ln(wp)?, wp)
        .div(&Ball::from_integer(&Integer::from(Integer::factorial(n as u32)), wp), wp)?;
    let lead = if n % 2 == 1 { lead.neg() } else { lead };
    let v = lead.sub(&series, wp);
    Ok((v, terms, xmn.mag().mul(&tail)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::parse_decimal;

    fn f(v: f64) -> Float {
        Float::with_val(64, v)
    }

    #[test]
    fn gamma_one_is_exp() {
        let v = hyp_series_origin(&Rational::from(1), &f(1.0), 100).unwrap();
        assert!(v.overlaps(&parse_decimal("0.36787944117144232159552377016146086745", 200).unwrap()));
        assert!(v.rad().le_pow2(-95));
    }

    #[test]
    fn half_at_one() {
        let v = hyp_series_origin(&Rational::from((1, 2)), &f(1.0), 60).unwrap();
        assert!(v.overlaps(&parse_decimal("0.27880558528066197650 +/- 1e-19", 128).unwrap()));
    }

    #[test]
    fn e1_at_one() {
        let v = singular_at_nonpositive_int(0, &f(1.0), 100).unwrap();
        assert!(v.overlaps(&parse_decimal("0.21938393439552027367716377546012164903 +/- 1e-37", 200).unwrap()));
        assert!(v.rad().le_pow2(-95));
    }

    #[test]
    fn tail_bound_infinite_before_convergence() {
        let a = Rational::from((1, 2));
        assert!(!hyp_origin_tail_bound(&a, &f(10.0), 3).unwrap().is_finite());
        assert!(hyp_origin_tail_bound(&a, &f(10.0), 30).unwrap().is_finite());
    }
}
