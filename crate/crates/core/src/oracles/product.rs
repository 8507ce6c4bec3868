//! `L(s, χ) = ∏_p (1 − χ(p) p^{−s})^{−1}` for `σ > 1`.
//!
//! With `L_P` the product over `p ≤ P`, `|log L − log L_P| ≤ E` where
//! `E = P^{1−σ} / ((σ−1)(1 − P^{−σ}))`, so `|L − L_P| ≤ |L_P|(e^E − 1)`.

use std::time::Instant;

use rug::Rational;

use super::{OracleMethod, OracleResult};
use crate::afe::LValue;
use crate::chars::{char_eval, DirichletChar};
use crate::numcore::{Ball, ComplexBall};
use crate::{Error, Result};

/// Largest prime cutoff accepted.
pub const MAX_CUTOFF: u64 = 50_000_000;

fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

fn cutoff(sig: f64, p: u32) -> Result<u64> {
    // P^{1−σ}/(σ−1) ≤ 2^{−p−4}·(σ−1)/σ, in logs
    let s1 = sig - 1.0;
    let need = (p as f64 + 6.0) + (sig / s1).log2() - s1.log2();
    let lp = need / s1;
    if lp > (MAX_CUTOFF as f64).log2() {
        return Err(Error::resource(format!(
            "Euler product would need primes up to 2^{lp:.1}"
        )));
    }
    Ok((lp.exp2().ceil() as u64).max(2))
}

/// `L(s, χ)` for `σ > 1` by the truncated Euler product.
pub fn zeta_euler_product(s: &Rational, chi: &DirichletChar, p: u32) -> Result<OracleResult> {
    if *s <= 1 {
        return Err(Error::domain("Euler product needs Re(s) > 1"));
    }
    let t = Instant::now();
    let sig = s.to_f64();
    let big = cutoff(sig, p)?;
    let primes = primes_up_to(big);
    let lg = 64 - (primes.len() as u64).leading_zeros();
    let wp = p + 2 * lg + 24;
    let neg_s = Rational::from(-s);
    let mut prod = ComplexBall::one();
    for &q in &primes {
        let Some(c) = char_eval(chi, q) else { continue };
        let ps = Ball::from_u64(q).pow_rational(&neg_s, wp)?;
        let f = ComplexBall::one().sub(&c.to_complex(wp).mul_real(&ps, wp), wp);
        prod = prod.mul(&f, wp);
    }
    // 1/prod
    let n2 = prod.norm_sqr(wp);
    let inv = ComplexBall::new(prod.re.div(&n2, wp)?, prod.im.neg().div(&n2, wp)?);

    // tail: E = P^{1−σ}/((σ−1)(1−P^{−σ})), error |L_P|(e^E − 1)
    let w = 64;
    let pb = Ball::from_u64(big);
    let sm1 = Rational::from(s - 1u32);
    let num = pb.pow_rational(&Rational::from(-&sm1), w)?;
    let den = Ball::from_rational(&sm1, w).mul(&Ball::one().sub(&pb.pow_rational(&neg_s, w)?, w), w);
    let e = num.div(&den, w)?;
    // e^E − 1 ≤ E e^E ≤ 2E for E ≤ 1/2
    let em1 = if e.mag().le_pow2(-1) {
        e.mag().mul_2exp(1)
    } else {
        Ball::exact(e.upper()).exp(w).sub(&Ball::one(), w).mag()
    };
    let err = inv.re.mag().add(&inv.im.mag()).mul(&em1);
    let real = chi.is_real();
    let re = inv.re.add_error(&err);
    let value = if real {
        LValue::Real(re)
    } else {
        LValue::Complex(ComplexBall::new(re, inv.im.add_error(&err)))
    };
    Ok(OracleResult {
        value,
        method: OracleMethod::EulerProduct,
        terms: primes.len() as u64,
        elapsed: t.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::const_pi;

    #[test]
    fn zeta_two_low_precision() {
        let v = zeta_euler_product(&Rational::from(2), &DirichletChar::trivial(), 16).unwrap();
        let pi2 = const_pi(128).sqr(128).div_i64(6, 128).unwrap();
        assert!(v.ball().overlaps(&pi2));
        assert!(v.ball().rad().le_pow2(-16));
    }

    #[test]
    fn zeta_thousand() {
        let v = zeta_euler_product(&Rational::from(1000), &DirichletChar::trivial(), 2000).unwrap();
        // 1 + 2^{−1000} + 3^{−1000} + …
        let lead = Ball::one().add(&Ball::one().mul_2exp(-1000), 2100);
        let d = v.ball().sub(&lead, 2100);
        assert!(d.is_positive());
        // the next term is 3^{−1000} ≈ 2^{−1584.96}
        assert!(d.mag().le_pow2(-1584));
        assert!(!d.mag().le_pow2(-1585));
    }

    #[test]
    fn rejects_strip() {
        assert!(zeta_euler_product(&Rational::from(1), &DirichletChar::trivial(), 16).is_err());
        assert!(matches!(
            zeta_euler_product(&Rational::from(2), &DirichletChar::trivial(), 4000),
            Err(Error::Resource(_))
        ));
    }
}
