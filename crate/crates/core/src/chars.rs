//! Dirichlet characters in Conrey labelling.
//!
//! `χ_{q,n}` is the product over `p^e ∥ q` of the prime-power characters
//! `χ_{p^e, n mod p^e}`. For odd `p` these are built from the least
//! primitive root `g_p` modulo `p²`:
//! `χ(m) = e(log_g n · log_g m / φ(p^e))`. For `2^e`, with
//! `m ≡ ε_m 5^{a_m} (mod 2^e)`:
//! `χ(m) = e((1 − ε_n)(1 − ε_m)/8 + a_n a_m / 2^{e−2})`.
//! Values are stored exactly as exponents of a root of unity.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rug::Rational;

use crate::numcore::{const_pi, Ball, ComplexBall};
use crate::{Error, Result};

/// Largest modulus accepted; the value table has `q` entries.
pub const MAX_MODULUS: u64 = 10_000_000;

/// `e^{2πik/ord}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    pub k: u64,
    pub ord: u64,
}

impl RootOfUnity {
    pub fn one() -> Self {
        RootOfUnity { k: 0, ord: 1 }
    }

    pub fn new(k: u64, ord: u64) -> Self {
        assert!(ord > 0);
        RootOfUnity { k: k % ord, ord }
    }

    /// Reduced exponent `k/ord ∈ [0, 1)`.
    pub fn exponent(&self) -> Rational {
        Rational::from((self.k, self.ord))
    }

    pub fn mul(&self, o: &RootOfUnity) -> RootOfUnity {
        let l = lcm(self.ord, o.ord);
        let k = (self.k as u128 * (l / self.ord) as u128 + o.k as u128 * (l / o.ord) as u128)
            % l as u128;
        RootOfUnity::new(k as u64, l).reduced()
    }

    pub fn conj(&self) -> RootOfUnity {
        RootOfUnity::new(self.ord - self.k, self.ord)
    }

    pub fn reduced(&self) -> RootOfUnity {
        let g = gcd(self.k, self.ord);
        RootOfUnity {
            k: self.k / g,
            ord: self.ord / g,
        }
    }

    /// The value as ±1 when it is real.
    pub fn as_sign(&self) -> Option<i64> {
        let r = self.reduced();
        match (r.k, r.ord) {
            (0, 1) => Some(1),
            (1, 2) => Some(-1),
            _ => None,
        }
    }

    /// Enclosure of the value; exact for fourth roots of unity.
    pub fn to_complex(&self, prec: u32) -> ComplexBall {
        let r = self.reduced();
        if 4 % r.ord == 0 {
            return ComplexBall::one().mul_i_pow((r.k * (4 / r.ord)) as u32);
        }
        // fold into the first octant before calling cos/sin
        let wp = prec + 8;
        let eighth = 8 * r.k;
        let oct = eighth / r.ord;
        let rem = Rational::from((eighth % r.ord, r.ord));
        let (t, swap) = if oct.is_multiple_of(2) {
            (rem, false)
        } else {
            ((1 - rem), true)
        };
        // φ = t·π/4 ∈ [0, π/4]; odd octants use cos φ' = sin(π/2 − φ')
        let ang = const_pi(wp).mul_rational(&(t / 4u32), wp);
        let (c, s) = (ang.cos(wp), ang.sin(wp));
        let (c, s) = if swap { (s, c) } else { (c, s) };
        // rotate by the quadrant
        let z = ComplexBall::new(c, s).mul_i_pow((oct / 2) as u32);
        ComplexBall::new(z.re.round(prec), z.im.round(prec))
    }
}

/// A Dirichlet character `χ_{q,n}` with its exact value table.
#[derive(Clone, PartialEq, Eq)]
pub struct DirichletChar {
    q: u64,
    n: u64,
    ord: u64,
    /// `table[m] = k` with `χ(m) = e(k/ord)`, `None` when `gcd(m, q) > 1`.
    table: Vec<Option<u64>>,
    parity: u8,
    conductor: u64,
}

impl DirichletChar {
    /// The character with Conrey label `q.n`; `n` is taken modulo `q`.
    pub fn new(q: u64, n: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::precondition("modulus must be at least 1"));
        }
        if q > MAX_MODULUS {
            return Err(Error::resource(format!("modulus {q} exceeds {MAX_MODULUS}")));
        }
        let n = n % q;
        if gcd(n, q) != 1 {
            return Err(Error::precondition(format!("index {n} not coprime to {q}")));
        }
        let comps: Vec<(u64, Vec<Option<u64>>, u64)> = factor(q)
            .into_iter()
            .map(|(p, e)| {
                let pe = p.pow(e);
                let (den, t) = prime_power_component(p, e, n % pe);
                (pe, t, den)
            })
            .collect();
        let l = comps.iter().fold(1, |acc, c| lcm(acc, c.2));
        let mut raw: Vec<Option<u64>> = Vec::with_capacity(q as usize);
        for m in 0..q {
            let mut k: Option<u64> = Some(0);
            for (pe, t, den) in &comps {
                k = match (k, t[(m % pe) as usize]) {
                    (Some(acc), Some(v)) => Some((acc + v * (l / den)) % l),
                    _ => None,
                };
            }
            raw.push(k);
        }
        let g = raw.iter().flatten().fold(l, |acc, &k| gcd(acc, k));
        let ord = l / g;
        let table: Vec<Option<u64>> = raw.into_iter().map(|k| k.map(|k| k / g)).collect();
        let minus_one = table[(q - 1) as usize].unwrap_or(0);
        let parity = u8::from(minus_one != 0);
        let mut chi = DirichletChar {
            q,
            n: if q == 1 { 1 } else { n },
            ord,
            table,
            parity,
            conductor: q,
        };
        chi.conductor = chi.find_conductor();
        Ok(chi)
    }

    pub fn trivial() -> Self {
        DirichletChar::new(1, 1).expect("trivial character")
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn index(&self) -> u64 {
        self.n
    }

    pub fn label(&self) -> String {
        format!("{}.{}", self.q, self.n)
    }

    pub fn order(&self) -> u64 {
        self.ord
    }

    /// `δ` with `χ(−1) = (−1)^δ`.
    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.q
    }

    pub fn is_principal(&self) -> bool {
        self.ord == 1
    }

    /// Whether all values are real (`±1` or `0`).
    pub fn is_real(&self) -> bool {
        self.ord <= 2
    }

    /// `χ(m)` as an exponent `k` with `χ(m) = e(k/ord)`, or `None` for zero.
    pub fn exponent(&self, m: u64) -> Option<u64> {
        self.table[(m % self.q) as usize]
    }

    /// The complex conjugate character `χ̄ = χ_{q, n⁻¹}`.
    pub fn conj(&self) -> DirichletChar {
        let table = self
            .table
            .iter()
            .map(|k| k.map(|k| (self.ord - k) % self.ord))
            .collect();
        let n = if self.q == 1 { 1 } else { inv_mod(self.n, self.q) };
        DirichletChar {
            n,
            table,
            ..self.clone()
        }
    }

    fn find_conductor(&self) -> u64 {
        for f in divisors(self.q) {
            let induced = (0..self.q / f).all(|j| {
                let m = 1 + j * f;
                match self.exponent(m) {
                    Some(k) => k == 0,
                    None => true,
                }
            });
            if induced {
                return f;
            }
        }
        self.q
    }
}

impl fmt::Debug for DirichletChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "χ_{{{}}} (order {}, parity {}, conductor {})",
            self.label(),
            self.ord,
            self.parity,
            self.conductor
        )
    }
}

impl FromStr for DirichletChar {
    type Err = Error;

    /// Parses a Conrey label `q.n`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse(format!("malformed character label {s:?}, expected q.n"));
        let (q, n) = s.trim().split_once('.').ok_or_else(bad)?;
        let q: u64 = q.parse().map_err(|_| bad())?;
        let n: u64 = n.parse().map_err(|_| bad())?;
        DirichletChar::new(q, n)
    }
}

/// `χ(m)`, or `None` when `gcd(m, q) > 1`.
pub fn char_eval(chi: &DirichletChar, m: u64) -> Option<RootOfUnity> {
    chi.exponent(m).map(|k| RootOfUnity::new(k, chi.ord))
}

/// The conductor `f` of `χ` and the primitive character mod `f` inducing it.
///
/// Conrey labels are not compatible with reduction in general (`χ_{16,9}` is
/// induced by `χ_{8,5}`), so the index is found by matching values on lifts
/// of the units mod `f`, trying `n mod f` first.
pub fn conductor_and_primitive_part(chi: &DirichletChar) -> (u64, DirichletChar) {
    let f = chi.conductor;
    if f == chi.q {
        return (f, chi.clone());
    }
    // a unit mod q in each unit class mod f
    let lifts: Vec<(u64, RootOfUnity)> = (1..f.max(2))
        .filter(|&u| gcd(u, f) == 1)
        .map(|u| {
            let m = (0..chi.q / f)
                .map(|j| u + j * f)
                .find(|&m| gcd(m, chi.q) == 1)
                .expect("every unit mod f lifts to a unit mod q");
            (m, char_eval(chi, m).expect("unit").reduced())
        })
        .collect();
    let matches = |c: &DirichletChar| {
        lifts
            .iter()
            .all(|(m, v)| char_eval(c, *m).map(|r| r.reduced()) == Some(*v))
    };
    let first = chi.n % f;
    std::iter::once(first)
        .chain((1..=f).filter(|&n| n != first))
        .filter_map(|n| DirichletChar::new(f, n).ok())
        .find(|c| matches(c))
        .map(|c| (f, c))
        .expect("the conductor admits an inducing character")
}

/// `τ(χ) = Σ_{m=1}^{q} χ(m) e(m/q)`; exponents are combined exactly and
/// equal terms are grouped before summation.
pub fn gauss_sum(chi: &DirichletChar, prec: u32) -> ComplexBall {
    let q = chi.q;
    if q == 1 {
        return ComplexBall::one();
    }
    let d = lcm(chi.ord, q);
    let mut counts: BTreeMap<u64, i64> = BTreeMap::new();
    for m in 1..=q {
        if let Some(k) = chi.exponent(m) {
            let e = (k as u128 * (d / chi.ord) as u128 + m as u128 * (d / q) as u128) % d as u128;
            *counts.entry(e as u64).or_default() += 1;
        }
    }
    let wp = prec + 2 * (64 - q.leading_zeros()) + 8;
    let mut acc = ComplexBall::zero();
    for (e, c) in counts {
        let z = RootOfUnity::new(e, d).to_complex(wp);
        acc = acc.add(&z.mul_real(&Ball::from_i64(c), wp), wp);
    }
    ComplexBall::new(acc.re.round(prec), acc.im.round(prec))
}

/// `ω = τ(χ) / (i^δ √q)` for primitive `χ`.
pub fn root_number(chi: &DirichletChar, prec: u32) -> Result<ComplexBall> {
    if !chi.is_primitive() {
        return Err(Error::precondition(format!(
            "root number of imprimitive character {}",
            chi.label()
        )));
    }
    let wp = prec + 16;
    let tau = gauss_sum(chi, wp);
    let sq = Ball::from_u64(chi.q).sqrt(wp)?;
    let w = tau.mul_i_pow(4 - chi.parity as u32).div_real(&sq, wp)?;
    Ok(ComplexBall::new(w.re.round(prec), w.im.round(prec)))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut t, mut nt, mut r, mut nr) = (0i128, 1i128, m as i128, a as i128);
    while nr != 0 {
        let qt = r / nr;
        (t, nt) = (nt, t - qt * nt);
        (r, nr) = (nr, r - qt * nr);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(m as i128) as u64
}

pub(crate) fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1];
    for (p, e) in factor(n) {
        let cur = ds.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            ds.extend(cur.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

/// Least primitive root modulo `p²` for an odd prime `p`.
fn primitive_root_mod_p2(p: u64) -> u64 {
    let fs: Vec<u64> = factor(p - 1).into_iter().map(|(r, _)| r).collect();
    let p2 = p * p;
    (2..p)
        .find(|&g| fs.iter().all(|r| pow_mod(g, (p - 1) / r, p) != 1) && pow_mod(g, p - 1, p2) != 1)
        .expect("primitive root exists")
}

/// Table of the prime-power component over `Z/den`, indexed by `m mod p^e`.
fn prime_power_component(p: u64, e: u32, n: u64) -> (u64, Vec<Option<u64>>) {
    let pe = p.pow(e);
    let mut t = vec![None; pe as usize];
    if p == 2 {
        match e {
            1 => {
                t[1] = Some(0);
                return (1, t);
            }
            2 => {
                let odd = n % 4 == 3;
                t[1] = Some(0);
                t[3] = Some(u64::from(odd));
                return (2, t);
            }
            _ => {
                // m ≡ ε·5^a; den = 2^{e−2}
                let den = pe / 4;
                let mut logs = vec![(0u64, 0u64); pe as usize];
                let mut x = 1u64;
                for a in 0..den {
                    logs[x as usize] = (0, a);
                    logs[(pe - x) as usize] = (1, a);
                    x = x * 5 % pe;
                }
                let (en, an) = logs[n as usize];
                for m in (1..pe).step_by(2) {
                    let (em, am) = logs[m as usize];
                    // (1−ε_n)(1−ε_m)/8 = 1/2 exactly when both signs are −1
                    let half = if en == 1 && em == 1 { den / 2 } else { 0 };
                    t[m as usize] = Some((half + an * am) % den);
                }
                return (den, t);
            }
        }
    }
    let phi = pe / p * (p - 1);
    let g = primitive_root_mod_p2(p);
    let mut logs = vec![0u64; pe as usize];
    let mut x = 1u64;
    for j in 0..phi {
        logs[x as usize] = j;
        x = mul_mod(x, g, pe);
    }
    let ln = logs[n as usize];
    for m in 1..pe {
        if m % p != 0 {
            t[m as usize] = Some(mul_mod(ln, logs[m as usize], phi));
        }
    }
    (phi, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signs(chi: &DirichletChar, upto: u64) -> Vec<i64> {
        (0..upto)
            .map(|m| char_eval(chi, m).map_or(0, |r| r.as_sign().unwrap()))
            .collect()
    }

    #[test]
    fn chi_4_3() {
        let chi: DirichletChar = "4.3".parse().unwrap();
        assert_eq!(signs(&chi, 4), vec![0, 1, 0, -1]);
        assert_eq!(chi.parity(), 1);
        assert!(chi.is_primitive());
        let w = root_number(&chi, 64).unwrap();
        assert!(w.re.contains_rational(&Rational::from(1)));
        assert!(w.im.contains_zero());
        let tau = gauss_sum(&chi, 64);
        assert!(tau.im.contains_rational(&Rational::from(2)) && tau.re.contains_zero());
    }

    #[test]
    fn trivial_character() {
        let chi = DirichletChar::trivial();
        assert!((0..10).all(|m| char_eval(&chi, m) == Some(RootOfUnity::one())));
        assert_eq!(chi.conductor(), 1);
        let w = root_number(&chi, 64).unwrap();
        assert!(w.re.contains_rational(&Rational::from(1)) && w.im.contains_zero());
    }

    #[test]
    fn conductors() {
        let (f, star) = conductor_and_primitive_part(&DirichletChar::new(6, 1).unwrap());
        assert_eq!(f, 1);
        assert_eq!(star.label(), "1.1");
        let (f, star) = conductor_and_primitive_part(&DirichletChar::new(16, 9).unwrap());
        assert_eq!((f, star.label()), (8, "8.5".to_string()));
        let chi = DirichletChar::new(23, 19).unwrap();
        assert_eq!(conductor_and_primitive_part(&chi).0, 23);
        // the character mod 8 agreeing with χ_{4.3} on odd residues
        let ind = (1..8)
            .step_by(2)
            .map(|n| DirichletChar::new(8, n).unwrap())
            .find(|c| signs(c, 8) == vec![0, 1, 0, -1, 0, 1, 0, -1])
            .unwrap();
        assert_eq!(ind.label(), "8.7");
        let (f, star) = conductor_and_primitive_part(&ind);
        assert_eq!((f, star.label()), (4, "4.3".to_string()));
        assert!(root_number(&ind, 32).is_err());
    }

    #[test]
    fn order_five_value() {
        let chi = DirichletChar::new(11, 3).unwrap();
        assert_eq!(chi.order(), 5);
        assert_eq!(chi.parity(), 0);
        assert!(chi.conj().conj() == chi);
    }

    #[test]
    fn label_errors() {
        assert!(matches!("4.2".parse::<DirichletChar>(), Err(Error::Precondition(_))));
        assert!(matches!("abc".parse::<DirichletChar>(), Err(Error::Parse(_))));
        assert!(matches!("0.1".parse::<DirichletChar>(), Err(Error::Precondition(_))));
    }

    #[test]
    fn roots_of_unity_to_complex() {
        for ord in 1..=24u64 {
            for k in 0..ord {
                let z = RootOfUnity::new(k, ord).to_complex(80);
                let t = 2.0 * std::f64::consts::PI * k as f64 / ord as f64;
                assert!((z.re.mid().to_f64() - t.cos()).abs() < 1e-12, "{k}/{ord}");
                assert!((z.im.mid().to_f64() - t.sin()).abs() < 1e-12, "{k}/{ord}");
                assert!(z.re.rad().le_pow2(-70));
            }
        }
    }
}
