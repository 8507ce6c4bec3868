//! Truncation and precision planning for the two series.

use rug::Rational;

use crate::chars::DirichletChar;
use crate::incgamma::{ln_gamma_f64, log2_incgamma_estimate};
use crate::numcore::{const_pi, Ball, Mag};
use crate::{Error, Result};

const LOG2_E: f64 = std::f64::consts::LOG2_E;
const BOUND_PREC: u32 = 128;
/// Upper limit on either truncation point.
pub const MAX_AFE_TERMS: u64 = 1_000_000;

/// Evaluation request for `L(s, χ)`.
#[derive(Debug, Clone)]
pub struct LValueRequest {
    pub chi: DirichletChar,
    pub s: Rational,
    /// Target precision in bits.
    pub prec: u32,
    pub alpha: Rational,
}

impl LValueRequest {
    pub fn new(chi: DirichletChar, s: Rational, prec: u32) -> Self {
        LValueRequest {
            chi,
            s,
            prec,
            alpha: Rational::from(1),
        }
    }

    pub fn with_alpha(mut self, alpha: Rational) -> Self {
        self.alpha = alpha;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.prec < 16 {
            return Err(Error::precondition("precision must be at least 16 bits"));
        }
        if self.alpha <= 0 {
            return Err(Error::precondition("alpha must be positive"));
        }
        if self.chi.modulus() == 1 {
            if self.s == 1 {
                return Err(Error::domain("zeta has a pole at s = 1"));
            }
            if self.s == 0 {
                return Err(Error::precondition(
                    "the delta term is singular at s = 0; use lfunc_eval",
                ));
            }
        }
        Ok(())
    }
}

/// Which of the two series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Series {
    /// `Σ χ(n) n^{−s} Γ((s+δ)/2, πn²α/q)`
    First,
    /// `Σ χ̄(n) n^{s−1} Γ((1−s+δ)/2, πn²/(αq))`
    Second,
}

/// Truncation points, tail bounds and per-term precisions.
#[derive(Debug, Clone)]
pub struct AFEPlan {
    pub n1: u64,
    pub n2: u64,
    /// Tail bound of the first series.
    pub eps1: Mag,
    /// Tail bound of the second series including `|(π/q)^{s−1/2}|`.
    pub eps2: Mag,
    /// Relative precision (bits) wanted for term `n` (index `n − 1`).
    pub prec1: Vec<u32>,
    pub prec2: Vec<u32>,
    /// Absolute tolerance (bits) passed to the incomplete gamma evaluations.
    pub abs1: Vec<i64>,
    pub abs2: Vec<i64>,
    pub c1: Rational,
    pub c2: Rational,
    /// `D` for each series, as f64 (informational).
    pub d1: f64,
    pub d2: f64,
    /// Series 2 equals series 1 and is not evaluated.
    pub symmetric: bool,
    /// log₂ of the absolute tolerance for `Γ((s+δ)/2) L(s, χ)`.
    pub tol_log2: i64,
    /// Working precision for the assembly.
    pub wp: u32,
}

fn series_constants(series: Series, s: &Rational, delta: u8, q: u64, alpha: &Rational) -> (Rational, Rational) {
    // C and D/π
    match series {
        Series::First => (
            Rational::from(s + delta as u32) / 2u32,
            Rational::from(alpha / q),
        ),
        Series::Second => (
            (Rational::from(1u32 - s) + delta as u32) / 2u32,
            Rational::from(alpha * q).recip(),
        ),
    }
}

/// `D^{C−1}/(1−B₀(C, DN²)) · e^{−DN²}/(N^{2−δ}(1−e^{−D}))`, an upper bound for
/// the tail `n ≥ N` of the chosen series (for the second series, without the
/// factor `|ω (π/q)^{s−1/2}|`).
pub fn tail_bound(
    series: Series,
    s: &Rational,
    delta: u8,
    q: u64,
    alpha: &Rational,
    n: u64,
) -> Result<Mag> {
    if n == 0 || q == 0 || delta > 1 || *alpha <= 0 {
        return Err(Error::precondition("tail bound needs N, q ≥ 1, α > 0"));
    }
    let wp = BOUND_PREC;
    let (c, d_over_pi) = series_constants(series, s, delta, q, alpha);
    let d = const_pi(wp).mul_rational(&d_over_pi, wp);
    let dn2 = d.mul(&Ball::from_u64(n).sqr(wp), wp);
    let cm1 = Rational::from(&c - 1u32);
    let b0 = if cm1 > 0 {
        Ball::from_rational(&cm1, wp).div(&dn2, wp)?
    } else {
        Ball::zero()
    };
    let one_minus_b0 = Ball::one().sub(&b0, wp);
    if !one_minus_b0.is_positive() {
        return Err(Error::precondition("tail bound hypothesis fails; increase N"));
    }
    let num = d
        .pow_rational(&cm1, wp)?
        .mul(&dn2.neg().exp(wp), wp);
    let den = one_minus_b0
        .mul(&Ball::from_u64(n).pow_u64(2 - delta as u64, wp), wp)
        .mul(&Ball::one().sub(&d.neg().exp(wp), wp), wp);
    if !den.is_positive() {
        return Err(Error::precondition("tail bound hypothesis fails; increase N"));
    }
    Ok(num.div(&den, wp)?.mag())
}

/// `|(π/q)^{σ−1/2}|` as an upper bound.
fn second_prefactor(s: &Rational, q: u64) -> Result<Mag> {
    let wp = BOUND_PREC;
    let e = s - Rational::from((1, 2));
    Ok(const_pi(wp)
        .div_i64(q as i64, wp)?
        .pow_rational(&e, wp)?
        .mag())
}

fn smallest_n(series: Series, req: &LValueRequest, delta: u8, scale: &Mag, target: i64) -> Result<(u64, Mag)> {
    let q = req.chi.modulus();
    // start near the f64 estimate and walk down/up with rigorous bounds
    let (_, dp) = series_constants(series, &req.s, delta, q, &req.alpha);
    let d = std::f64::consts::PI * dp.to_f64();
    let guess = ((-(target as f64) / LOG2_E / d).max(0.0)).sqrt() as u64;
    let ok = |n: u64| -> Result<Option<Mag>> {
        match tail_bound(series, &req.s, delta, q, &req.alpha, n) {
            Ok(b) => {
                let b = b.mul(scale);
                Ok(b.le_pow2(target).then_some(b))
            }
            Err(Error::Precondition(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let mut n = guess.saturating_sub(2).max(1);
    while n > 1 && ok(n - 1)?.is_some() {
        n -= 1;
    }
    loop {
        if let Some(b) = ok(n)? {
            return Ok((n, b));
        }
        n += 1;
        if n > MAX_AFE_TERMS {
            return Err(Error::resource("AFE truncation exceeds the term cap"));
        }
    }
}

fn log2_abs_gamma(a: f64) -> f64 {
    ln_gamma_f64(a) * LOG2_E
}

/// Whether `a` is `0, −1, −2, …`.
pub(crate) fn is_gamma_pole(a: &Rational) -> bool {
    *a.denom() == 1 && *a <= 0
}

/// Chooses `N₁`, `N₂` and the per-term precisions.
pub fn choose_truncation(req: &LValueRequest) -> Result<AFEPlan> {
    plan_with_guard(req, 0)
}

pub(crate) fn plan_with_guard(req: &LValueRequest, guard: i64) -> Result<AFEPlan> {
    req.validate()?;
    let q = req.chi.modulus();
    let delta = req.chi.parity();
    let s = &req.s;
    let sf = s.to_f64();
    let p = req.prec as i64 + guard;

    let (c1, dp1) = series_constants(Series::First, s, delta, q, &req.alpha);
    let (c2, dp2) = series_constants(Series::Second, s, delta, q, &req.alpha);
    let d1 = std::f64::consts::PI * dp1.to_f64();
    let d2 = std::f64::consts::PI * dp2.to_f64();

    // scale of Γ((s+δ)/2); near a pole the product Γ·L stays finite, so only
    // the size of Γ matters when it is large
    let c1f = c1.to_f64();
    let lg = if is_gamma_pole(&c1) {
        0.0
    } else {
        log2_abs_gamma(c1f).min(1e6)
    };
    let tol_log2 = -p - 4 + lg.floor() as i64 - 1;

    let symmetric = req.chi.is_real() && *s.numer() == 1 && *s.denom() == 2 && req.alpha == 1;
    let pref2 = second_prefactor(s, q)?;
    let (n1, eps1) = smallest_n(Series::First, req, delta, &Mag::from_u64(1), tol_log2 - 2)?;
    let (n2, eps2) = if symmetric {
        (n1, eps1.clone())
    } else {
        smallest_n(Series::Second, req, delta, &pref2, tol_log2 - 2)?
    };

    let total = if symmetric { n1 } else { n1 + n2 };
    let lgn = 64 - total.leading_zeros() as i64;
    // absolute error allowed per term
    let term_tol = tol_log2 - 2 - lgn;
    let lpref2 = pref2.log2_approx();
    let c2f = c2.to_f64();

    let mut prec1 = Vec::with_capacity(n1 as usize);
    let mut abs1 = Vec::with_capacity(n1 as usize);
    let mut max_mag = lg;
    for n in 1..n1 {
        let lnn = (n as f64).log2();
        let lgam = log2_incgamma_estimate(c1f, d1 * (n * n) as f64);
        let mag = lgam - sf * lnn;
        max_mag = max_mag.max(mag);
        prec1.push(((mag - term_tol as f64).ceil() as i64).max(16) as u32);
        // the incomplete gamma value is multiplied by n^{−s}
        abs1.push(-term_tol + (-sf * lnn).max(0.0).ceil() as i64 + 2);
    }
    let mut prec2 = Vec::new();
    let mut abs2 = Vec::new();
    if !symmetric {
        for n in 1..n2 {
            let lnn = (n as f64).log2();
            let lgam = log2_incgamma_estimate(c2f, d2 * (n * n) as f64);
            let mag = lgam + (sf - 1.0) * lnn + lpref2;
            max_mag = max_mag.max(mag);
            prec2.push(((mag - term_tol as f64).ceil() as i64).max(16) as u32);
            abs2.push(-term_tol + ((sf - 1.0) * lnn + lpref2).max(0.0).ceil() as i64 + 2);
        }
    }
    let wp_abs = (max_mag.ceil() as i64 - tol_log2 + lgn + 16).max(0);
    let wp = (req.prec as i64 + guard + 32 + lgn).max(wp_abs).max(64) as u32;

    Ok(AFEPlan {
        n1,
        n2,
        eps1,
        eps2,
        prec1,
        prec2,
        abs1,
        abs2,
        c1,
        c2,
        d1,
        d2,
        symmetric,
        tol_log2,
        wp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta_req(s: Rational, p: u32) -> LValueRequest {
        LValueRequest::new(DirichletChar::trivial(), s, p)
    }

    #[test]
    fn bound_decreasing() {
        let s = Rational::from((1, 2));
        let one = Rational::from(1);
        let mut prev = Mag::inf();
        for n in 2..=40 {
            let b = tail_bound(Series::First, &s, 0, 1, &one, n).unwrap();
            assert!(b.as_float() < prev.as_float(), "N = {n}");
            prev = b;
        }
    }

    #[test]
    fn hypothesis_violation() {
        // C − 1 = 9 with D·1² = π: B₀ > 1
        let s = Rational::from(20);
        let r = tail_bound(Series::First, &s, 0, 1, &Rational::from(1), 1);
        assert!(matches!(r, Err(Error::Precondition(_))));
        assert!(tail_bound(Series::First, &s, 0, 1, &Rational::from(1), 3).is_ok());
    }

    #[test]
    fn smallest_n_for_64_bits() {
        let s = Rational::from((1, 2));
        let one = Rational::from(1);
        let n = (1..)
            .find(|&n| tail_bound(Series::First, &s, 0, 1, &one, n).unwrap().le_pow2(-64))
            .unwrap();
        assert_eq!(n, 4);
    }

    #[test]
    fn symmetric_zeta_half() {
        let p = choose_truncation(&zeta_req(Rational::from((1, 2)), 1000)).unwrap();
        assert!(p.symmetric);
        assert_eq!(p.n1, p.n2);
        let r = zeta_req(Rational::from((1, 2)), 1000).with_alpha(Rational::from(1));
        let mut r2 = r.clone();
        r2.chi = DirichletChar::new(4, 3).unwrap();
        assert!(choose_truncation(&r2).unwrap().symmetric);
    }

    #[test]
    fn growth_with_precision_and_modulus() {
        let s = Rational::from((1, 2));
        let a = choose_truncation(&zeta_req(s.clone(), 2000)).unwrap().n1 as f64;
        let b = choose_truncation(&zeta_req(s.clone(), 4000)).unwrap().n1 as f64;
        assert!((b - a * 2f64.sqrt()).abs() <= 2.0, "{a} {b}");
        let chi = DirichletChar::new(23, 19).unwrap();
        let c = choose_truncation(&LValueRequest::new(chi, s, 2000)).unwrap().n1 as f64;
        assert!((c - a * 23f64.sqrt()).abs() <= 2.0, "{a} {c}");
    }

    #[test]
    fn precision_schedule_clamped() {
        let p = choose_truncation(&zeta_req(Rational::from(2), 200)).unwrap();
        assert!(p.prec1.iter().chain(&p.prec2).all(|&b| b >= 16));
        assert_eq!(p.prec1.len() as u64, p.n1 - 1);
        assert!(p.wp >= 200 + 32);
    }

    #[test]
    fn rejects_zeta_poles() {
        assert!(matches!(choose_truncation(&zeta_req(Rational::from(1), 64)), Err(Error::Domain(_))));
        assert!(choose_truncation(&zeta_req(Rational::from(0), 64)).is_err());
        assert!(choose_truncation(&zeta_req(Rational::from(2), 8)).is_err());
    }
}
