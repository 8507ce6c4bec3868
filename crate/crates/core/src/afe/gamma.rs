//! `Γ(a)` for rational `a`.
//!
//! `a` is shifted to `a′ ∈ [1, 2)`, and `Γ(a′) = γ(a′, X) + Γ(a′, X)` with an
//! integer `X ≈ p·log 2`, where the lower series is summed by binary
//! splitting and `0 ≤ Γ(a′, X) ≤ X^{a′−1}e^{−X}(1 + 1/X)`.
//!
//! Values of `Γ(a′)` are cached per canonical precision level, and each level
//! is always computed the same way, so results do not depend on the cache.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::{Float, Integer, Rational};

use crate::binsplit::{bsplit_product, RatMatrix};
use crate::incgamma::lower_gamma;
use crate::numcore::{Ball, Mag};
use crate::{Error, Result};

type Cache = Mutex<HashMap<(Rational, u32), Ball>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The precision level used for a request of `p` bits: `p + 16` rounded up
/// to `{4, 5, 6, 7}·2^k / 4`, and at least 64.
pub(crate) fn canonical_precision(p: u32) -> u32 {
    let want = (p + 16).max(64);
    let k = 31 - want.leading_zeros();
    let base = 1u32 << k;
    let step = (base / 4).max(1);
    want.div_ceil(step) * step
}

/// `Γ(a)` with radius at most about `2^{−p}·|Γ(a)|`.
pub fn gamma_rational(a: &Rational, p: u32) -> Result<Ball> {
    if *a.denom() == 1 {
        if *a.numer() <= 0 {
            return Err(Error::domain(format!("Γ has a pole at {a}")));
        }
        let n = a
            .numer()
            .to_u32()
            .ok_or_else(|| Error::resource("Γ argument too large"))?;
        let f = Integer::from(Integer::factorial(n - 1));
        return Ok(Ball::from_integer(&f, p.max(16) + 4));
    }
    let pc = canonical_precision(p);
    let fl = Integer::from(a.floor_ref());
    let ap = Rational::from(a - &fl) + 1u32;
    let base = gamma_shifted(&ap, pc)?;
    // a = a′ + k
    let k = (fl - 1u32)
        .to_i64()
        .ok_or_else(|| Error::resource("Γ argument too large"))?;
    let wp = pc + 8;
    let v = match k.cmp(&0) {
        std::cmp::Ordering::Equal => base,
        std::cmp::Ordering::Greater => {
            let prod = rising(&ap, k as u64)?;
            base.mul(&Ball::from_rational(&prod, wp), wp)
        }
        std::cmp::Ordering::Less => {
            let prod = rising(a, k.unsigned_abs())?;
            base.div(&Ball::from_rational(&prod, wp), wp)?
        }
    };
    Ok(v.round(p.max(16) + 8))
}

/// `(b)_n = b(b+1)⋯(b+n−1)` exactly.
fn rising(b: &Rational, n: u64) -> Result<Rational> {
    if n == 0 {
        return Ok(Rational::from(1));
    }
    let (bn, bd) = (b.numer().clone(), b.denom().clone());
    let f = move |j: u64| {
        RatMatrix::from_integers(1, vec![Integer::from(&bd * j) + &bn], bd.clone())
    };
    Ok(bsplit_product(&f, 0, n)?.entry(0, 0))
}

/// `Γ(a′)` for `a′ ∈ [1, 2)` at precision level `pc`.
fn gamma_shifted(ap: &Rational, pc: u32) -> Result<Ball> {
    let key = (ap.clone(), pc);
    if let Some(v) = cache().lock().expect("gamma cache").get(&key) {
        return Ok(v.clone());
    }
    let v = compute_gamma_shifted(ap, pc)?;
    cache()
        .lock()
        .expect("gamma cache")
        .entry(key)
        .or_insert_with(|| v.clone());
    Ok(v)
}

fn compute_gamma_shifted(ap: &Rational, pc: u32) -> Result<Ball> {
    let pf = pc as f64 + 12.0;
    let x = (pf * std::f64::consts::LN_2 + 2.0 * (pf + 8.0).ln()).ceil();
    let xf = Float::with_val(64, x);
    let low = lower_gamma(ap, &xf, pc as i64 + 4)?;
    // upper part: X^{a′−1} e^{−X} (1 + 1/X)
    let wp = 64;
    let xb = Ball::exact(xf.clone());
    let am1 = Rational::from(ap - 1u32);
    let up = xb
        .pow_rational(&am1, wp)?
        .mul(&xb.neg().exp(wp), wp)
        .mul(&Ball::from_rational(&Rational::from((x as u64 + 1, x as u64)), wp), wp)
        .mag();
    let half = up.mul(&Mag::pow2(-1));
    let upper = Ball::new(half.as_float().clone(), half);
    Ok(low.add(&upper, pc + 8).round(pc + 8))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::parse_decimal;

    #[test]
    fn integers() {
        assert!(gamma_rational(&Rational::from(1), 64).unwrap().contains_rational(&Rational::from(1)));
        assert!(gamma_rational(&Rational::from(2), 64).unwrap().contains_rational(&Rational::from(1)));
        assert!(gamma_rational(&Rational::from(6), 64).unwrap().contains_rational(&Rational::from(120)));
        assert!(matches!(gamma_rational(&Rational::from(-3), 64), Err(Error::Domain(_))));
        assert!(matches!(gamma_rational(&Rational::new(), 64), Err(Error::Domain(_))));
    }

    #[test]
    fn half() {
        let g = gamma_rational(&Rational::from((1, 2)), 128).unwrap();
        let sqrt_pi = crate::numcore::const_pi(200).sqrt(200).unwrap();
        assert!(g.overlaps(&sqrt_pi));
        assert!(g.rad().le_pow2(-125));
    }

    #[test]
    fn shifted_arguments() {
        // Γ(−5/2) = −8√π/15, Γ(7/3) = (4/3)(1/3)Γ(1/3)
        let g = gamma_rational(&Rational::from((-5, 2)), 100).unwrap();
        assert!(g.overlaps(&parse_decimal("-0.94530872048294188123 +/- 1e-19", 128).unwrap()));
        let g = gamma_rational(&Rational::from((7, 3)), 100).unwrap();
        assert!(g.overlaps(&parse_decimal("1.1906393487589989483 +/- 1e-18", 128).unwrap()));
    }

    #[test]
    fn refinement() {
        let a = Rational::from((1, 3));
        let lo = gamma_rational(&a, 256).unwrap();
        let hi = gamma_rational(&a, 512).unwrap();
        assert!(lo.contains_float(hi.mid()));
    }

    #[test]
    fn levels() {
        assert_eq!(canonical_precision(10), 64);
        assert_eq!(canonical_precision(100), 128);
        assert!(canonical_precision(1000) >= 1016 && canonical_precision(1000) <= 1280);
    }
}
