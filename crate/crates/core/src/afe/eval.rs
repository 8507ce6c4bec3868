//! Assembly of `L(s, χ)` from the two truncated series.

use rayon::prelude::*;
use rug::Rational;

use super::gamma::gamma_rational;
use super::plan::{is_gamma_pole, plan_with_guard, AFEPlan, LValueRequest};
use crate::chars::{char_eval, conductor_and_primitive_part, factor, root_number, DirichletChar};
use crate::incgamma::incgamma_bitburst;
use crate::numcore::{const_pi, Ball, ComplexBall, Mag};
use crate::{Error, Result};

const LOG2_E: f64 = std::f64::consts::LOG2_E;
const MAX_RETRIES: usize = 4;

/// A value of `L(s, χ)`: real for real characters.
#[derive(Debug, Clone)]
pub enum LValue {
    Real(Ball),
    Complex(ComplexBall),
}

impl LValue {
    pub fn as_complex(&self) -> ComplexBall {
        match self {
            LValue::Real(b) => ComplexBall::from_real(b.clone()),
            LValue::Complex(c) => c.clone(),
        }
    }

    pub fn real(&self) -> Option<&Ball> {
        match self {
            LValue::Real(b) => Some(b),
            LValue::Complex(_) => None,
        }
    }

    pub fn overlaps(&self, other: &LValue) -> bool {
        self.as_complex().overlaps(&other.as_complex())
    }

    /// Largest radius of the real and imaginary parts.
    pub fn rad(&self) -> Mag {
        match self {
            LValue::Real(b) => b.rad().clone(),
            LValue::Complex(c) => c.re.rad().max(c.im.rad()),
        }
    }

    /// Upper bound for the absolute value.
    pub fn mag(&self) -> Mag {
        match self {
            LValue::Real(b) => b.mag(),
            LValue::Complex(c) => c.re.mag().add(&c.im.mag()),
        }
    }

    fn from_complex(c: ComplexBall, real: bool) -> Result<LValue> {
        if real {
            if !c.im.contains_zero() {
                return Err(Error::precondition(
                    "imaginary part of a real L-value excludes zero",
                ));
            }
            Ok(LValue::Real(c.re))
        } else {
            Ok(LValue::Complex(c))
        }
    }
}

fn add_err(c: &ComplexBall, e: &Mag, real: bool) -> ComplexBall {
    let re = c.re.add_error(e);
    let im = if real { c.im.clone() } else { c.im.add_error(e) };
    ComplexBall::new(re, im)
}

fn char_value(chi: &DirichletChar, n: u64, conj: bool, prec: u32) -> Option<ComplexBall> {
    let r = char_eval(chi, n)?;
    let r = if conj { r.conj() } else { r };
    Some(r.to_complex(prec))
}

/// `z = π n² · r` with enough bits for an absolute tolerance `2^{−abs}` of
/// `Γ(a, z)`.
fn gamma_arg(n: u64, r: &Rational, a: &Rational, abs: i64) -> Ball {
    let zr = Rational::from(r * (n * n));
    let zf = std::f64::consts::PI * zr.to_f64();
    let deriv = (a.to_f64() - 1.0) * zf.log2() - zf * LOG2_E;
    let bits = abs + zf.log2().max(0.0).ceil() as i64 + deriv.max(0.0).ceil() as i64 + 16;
    let bits = bits.max(64) as u32;
    const_pi(bits).mul_rational(&zr, bits)
}

/// `Σ_{n<N} c(n) n^{e} Γ(a, πn²r)` for one series.
#[allow(clippy::too_many_arguments)]
fn series_sum(
    chi: &DirichletChar,
    conj: bool,
    e: &Rational,
    a: &Rational,
    r: &Rational,
    abs: &[i64],
    wp: u32,
) -> Result<ComplexBall> {
    let terms: Vec<Result<Option<ComplexBall>>> = (1..=abs.len() as u64)
        .into_par_iter()
        .map(|n| {
            let Some(c) = char_value(chi, n, conj, wp) else {
                return Ok(None);
            };
            let z = gamma_arg(n, r, a, abs[n as usize - 1]);
            let g = incgamma_bitburst(a, &z, abs[n as usize - 1])?;
            let t = if n == 1 {
                g
            } else {
                Ball::from_u64(n).pow_rational(e, wp)?.mul(&g, wp)
            };
            Ok(Some(c.mul_real(&t, wp)))
        })
        .collect();
    let mut sum = ComplexBall::zero();
    for t in terms {
        if let Some(t) = t? {
            sum = sum.add(&t, wp);
        }
    }
    Ok(sum)
}

/// `π^{s/2}(α^{(s−1)/2}/(s−1) − α^{s/2}/s)`.
fn delta_term(s: &Rational, alpha: &Rational, wp: u32) -> Result<Ball> {
    let half = |x: Rational| x / 2u32;
    let al = Ball::from_rational(alpha, wp);
    let sm1 = Rational::from(s - 1u32);
    let t1 = al.pow_rational(&half(sm1.clone()), wp)?.div(&Ball::from_rational(&sm1, wp), wp)?;
    let t2 = al.pow_rational(&half(s.clone()), wp)?.div(&Ball::from_rational(s, wp), wp)?;
    let pis = const_pi(wp).pow_rational(&half(s.clone()), wp)?;
    Ok(pis.mul(&t1.sub(&t2, wp), wp))
}

/// `Γ((s+δ)/2) L(s, χ)` for primitive `χ` from the plan.
fn gamma_times_l(req: &LValueRequest, plan: &AFEPlan) -> Result<ComplexBall> {
    let chi = &req.chi;
    let q = chi.modulus();
    let real = chi.is_real();
    let wp = plan.wp;
    let s = &req.s;
    let r1 = Rational::from(&req.alpha / q);
    let neg_s = Rational::from(-s);
    let s1 = series_sum(chi, false, &neg_s, &plan.c1, &r1, &plan.abs1, wp)?;
    let mut total = add_err(&s1, &plan.eps1, real);
    if plan.symmetric {
        total = total.add(&total, wp);
    } else {
        let r2 = Rational::from(&req.alpha * q).recip();
        let sm1 = Rational::from(s - 1u32);
        let s2 = series_sum(chi, true, &sm1, &plan.c2, &r2, &plan.abs2, wp)?;
        let omega = root_number(chi, wp)?;
        let e = s - Rational::from((1, 2));
        let pref = const_pi(wp).div_i64(q as i64, wp)?.pow_rational(&e, wp)?;
        let s2 = s2.mul(&omega, wp).mul_real(&pref, wp);
        total = total.add(&add_err(&s2, &plan.eps2, real), wp);
    }
    if q == 1 {
        let d = delta_term(s, &req.alpha, wp)?;
        total = total.add(&ComplexBall::from_real(d), wp);
    }
    Ok(total)
}

/// Whether `L(s, χ) = 0` at a trivial zero (primitive `χ`).
fn is_trivial_zero(chi: &DirichletChar, s: &Rational) -> bool {
    let c = Rational::from(s + chi.parity() as u32) / 2u32;
    is_gamma_pole(&c) && !(chi.modulus() == 1 && *s == 0)
}

fn require_primitive(chi: &DirichletChar) -> Result<()> {
    if chi.is_primitive() {
        Ok(())
    } else {
        Err(Error::precondition(format!(
            "character {} is not primitive",
            chi.label()
        )))
    }
}

fn meets_target(v: &ComplexBall, p: u32, real: bool) -> f64 {
    // excess in bits of the radius over 2^{−p}·max(1, |L|)
    let lm = v.re.mag().add(&v.im.mag()).log2_approx().max(0.0);
    let r = if real { v.re.rad().clone() } else { v.re.rad().max(v.im.rad()) };
    r.log2_approx() + p as f64 - lm
}

/// `L(s, χ)` for primitive `χ` by the approximate functional equation.
pub fn afe_eval(req: &LValueRequest) -> Result<LValue> {
    afe_eval_with_plan(req).map(|r| r.0)
}

/// As [`afe_eval`], also returning the final plan (`None` at trivial zeros).
pub fn afe_eval_with_plan(req: &LValueRequest) -> Result<(LValue, Option<AFEPlan>)> {
    req.validate()?;
    require_primitive(&req.chi)?;
    let real = req.chi.is_real();
    if is_trivial_zero(&req.chi, &req.s) {
        let z = ComplexBall::zero();
        return Ok((LValue::from_complex(z, real)?, None));
    }
    let c1 = Rational::from(&req.s + req.chi.parity() as u32) / 2u32;
    let mut guard = 0i64;
    for _ in 0..MAX_RETRIES {
        let plan = plan_with_guard(req, guard)?;
        let gl = gamma_times_l(req, &plan)?;
        let g = gamma_rational(&c1, plan.wp)?;
        let v = ComplexBall::new(gl.re.div(&g, plan.wp)?, gl.im.div(&g, plan.wp)?);
        let excess = meets_target(&v, req.prec, real);
        if excess <= 0.0 {
            let v = ComplexBall::new(v.re.round(req.prec + 32), v.im.round(req.prec + 32));
            return Ok((LValue::from_complex(v, real)?, Some(plan)));
        }
        if !excess.is_finite() {
            break;
        }
        guard += excess.ceil() as i64 + 16;
    }
    Err(Error::resource(format!(
        "L-value: tolerance 2^-{} not reached",
        req.prec
    )))
}

/// The completed function `Λ(s, χ) = (q/π)^{(s+δ)/2} Γ((s+δ)/2) L(s, χ)` for
/// primitive `χ`, finite at the trivial zeros.
pub fn completed_eval(req: &LValueRequest) -> Result<LValue> {
    req.validate()?;
    require_primitive(&req.chi)?;
    let real = req.chi.is_real();
    let q = req.chi.modulus();
    let c1 = Rational::from(&req.s + req.chi.parity() as u32) / 2u32;
    let mut guard = 0i64;
    for _ in 0..MAX_RETRIES {
        let plan = plan_with_guard(req, guard)?;
        let wp = plan.wp;
        let gl = gamma_times_l(req, &plan)?;
        let f = Ball::from_rational(&Rational::from(q), wp)
            .div(&const_pi(wp), wp)?
            .pow_rational(&c1, wp)?;
        let v = gl.mul_real(&f, wp);
        let excess = meets_target(&v, req.prec, real);
        if excess <= 0.0 {
            return LValue::from_complex(v, real);
        }
        if !excess.is_finite() {
            break;
        }
        guard += excess.ceil() as i64 + 16;
    }
    Err(Error::resource("completed L-value: tolerance not reached"))
}

/// `L(s, χ)` for any `χ`, through the primitive character inducing it:
/// `L(s, χ) = L(s, χ*) ∏_{p | q, p ∤ f} (1 − χ*(p) p^{−s})`.
pub fn lfunc_eval(req: &LValueRequest) -> Result<LValue> {
    lfunc_eval_with_plan(req).map(|r| r.0)
}

/// As [`lfunc_eval`], also returning the plan used for the primitive part.
pub fn lfunc_eval_with_plan(req: &LValueRequest) -> Result<(LValue, Option<AFEPlan>)> {
    if req.prec < 16 {
        return Err(Error::precondition("precision must be at least 16 bits"));
    }
    let chi = &req.chi;
    let real = chi.is_real();
    let (f, prim) = conductor_and_primitive_part(chi);
    if f == 1 && req.s == 1 {
        return Err(Error::domain("L(s, χ) has a pole at s = 1 for principal χ"));
    }
    let q = chi.modulus();
    let primes: Vec<u64> = factor(q)
        .into_iter()
        .map(|(p, _)| p)
        .filter(|p| f % p != 0)
        .collect();
    let sf = req.s.to_f64();
    let extra: f64 = primes
        .iter()
        .map(|&p| (1.0 + (p as f64).powf(-sf)).log2())
        .sum();
    let wp = req.prec + extra.ceil() as u32 + 16;

    let sub = LValueRequest {
        chi: prim.clone(),
        s: req.s.clone(),
        prec: wp,
        alpha: req.alpha.clone(),
    };
    let (base, plan) = if f == 1 && req.s == 0 {
        let v = Ball::from_rational(&Rational::from((-1, 2)), 64);
        (LValue::Real(v), None)
    } else {
        afe_eval_with_plan(&sub)?
    };
    if primes.is_empty() {
        let v = match base {
            LValue::Real(b) => LValue::Real(b.round(req.prec + 32)),
            c => c,
        };
        return Ok((v, plan));
    }
    let neg_s = Rational::from(-&req.s);
    let mut v = base.as_complex();
    for p in primes {
        let c = char_value(&prim, p, false, wp + 8).expect("p does not divide the conductor");
        let ps = Ball::from_u64(p).pow_rational(&neg_s, wp + 8)?;
        let fac = ComplexBall::one().sub(&c.mul_real(&ps, wp + 8), wp + 8);
        v = v.mul(&fac, wp + 8);
    }
    Ok((LValue::from_complex(v, real)?, plan))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::parse_decimal;

    fn zeta(s: Rational, p: u32) -> Ball {
        let r = LValueRequest::new(DirichletChar::trivial(), s, p);
        afe_eval(&r).unwrap().real().unwrap().clone()
    }

    #[test]
    fn zeta_half() {
        let v = zeta(Rational::from((1, 2)), 128);
        let want = parse_decimal("-1.4603545088095868128894991525152980125 +/- 1e-37", 200).unwrap();
        assert!(v.overlaps(&want), "{v:?}");
        assert!(v.rad().le_pow2(-127));
    }

    #[test]
    fn zeta_two_and_minus_one() {
        let v = zeta(Rational::from(2), 200);
        let pi2 = const_pi(256).sqr(256).div_i64(6, 256).unwrap();
        assert!(v.overlaps(&pi2));
        let v = zeta(Rational::from(-1), 200);
        assert!(v.contains_rational(&Rational::from((-1, 12))));
        assert!(v.rad().le_pow2(-199));
    }

    #[test]
    fn beta_one() {
        let chi = DirichletChar::new(4, 3).unwrap();
        let v = afe_eval(&LValueRequest::new(chi, Rational::from(1), 150)).unwrap();
        let want = const_pi(256).div_i64(4, 256).unwrap();
        assert!(v.real().unwrap().overlaps(&want));
    }

    #[test]
    fn trivial_zeros_and_table() {
        let v = zeta(Rational::from(-4), 64);
        assert!(v.is_exact() && v.mid().is_zero());
        let chi = DirichletChar::new(4, 3).unwrap();
        let v = afe_eval(&LValueRequest::new(chi, Rational::from(-3), 64)).unwrap();
        assert!(v.real().unwrap().mid().is_zero());
        let r = LValueRequest::new(DirichletChar::trivial(), Rational::from(0), 64);
        assert!(afe_eval(&r).is_err());
        let v = lfunc_eval(&r).unwrap();
        assert!(v.real().unwrap().contains_rational(&Rational::from((-1, 2))));
        let r = LValueRequest::new(DirichletChar::trivial(), Rational::from(1), 64);
        assert!(matches!(lfunc_eval(&r), Err(Error::Domain(_))));
    }

    #[test]
    fn complex_character() {
        // χ_{5.2} has order 4; compare with the direct series at s = 3
        let chi = DirichletChar::new(5, 2).unwrap();
        let v = afe_eval(&LValueRequest::new(chi.clone(), Rational::from(3), 64)).unwrap();
        let LValue::Complex(c) = v else { panic!("expected complex") };
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        for n in 1..200000u64 {
            if let Some(r) = char_eval(&chi, n) {
                let t = 2.0 * std::f64::consts::PI * r.exponent().to_f64();
                let w = (n as f64).powi(-3);
                re += t.cos() * w;
                im += t.sin() * w;
            }
        }
        assert!((c.re.mid().to_f64() - re).abs() < 1e-9);
        assert!((c.im.mid().to_f64() - im).abs() < 1e-9);
    }

    #[test]
    fn imprimitive_principal_mod_two() {
        let chi = DirichletChar::new(2, 1).unwrap();
        let v = lfunc_eval(&LValueRequest::new(chi, Rational::from(2), 128)).unwrap();
        let want = const_pi(200).sqr(200).div_i64(8, 200).unwrap();
        assert!(v.real().unwrap().overlaps(&want));
        let chi = DirichletChar::new(6, 1).unwrap();
        let r = LValueRequest::new(chi, Rational::from(2), 64);
        assert!(afe_eval(&r).is_err());
    }
}
