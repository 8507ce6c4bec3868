//! Exact products `U_{hi−1} ⋯ U_{lo+1} U_lo` of small rational matrices by
//! binary splitting.
//!
//! A [`RatMatrix`] is stored as an integer matrix over one common positive
//! denominator. Products are never reduced, so the serial and parallel
//! drivers, which split at the same points, return identical entries.

use std::fmt;

use rug::float::Round;
use rug::{Float, Integer, Rational};

use crate::numcore::{round_to, Ball, Mag};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    dim: usize,
    num: Vec<Integer>,
    den: Integer,
}

impl RatMatrix {
    pub fn identity(dim: usize) -> Self {
        assert!((1..=3).contains(&dim), "matrix dimension must be 1, 2 or 3");
        let mut num = vec![Integer::new(); dim * dim];
        for i in 0..dim {
            num[i * dim + i] = Integer::from(1);
        }
        RatMatrix {
            dim,
            num,
            den: Integer::from(1),
        }
    }

    /// Builds `num / den` from row-major integer entries; `den` must be nonzero.
    pub fn from_integers(dim: usize, num: Vec<Integer>, den: Integer) -> Self {
        assert!((1..=3).contains(&dim), "matrix dimension must be 1, 2 or 3");
        assert_eq!(num.len(), dim * dim);
        assert!(den != 0, "zero denominator");
        if den < 0 {
            RatMatrix {
                dim,
                num: num.into_iter().map(|x| -x).collect(),
                den: -den,
            }
        } else {
            RatMatrix { dim, num, den }
        }
    }

    /// Builds a matrix from row-major rational entries over their lcm.
    pub fn from_rationals(dim: usize, entries: &[Rational]) -> Self {
        assert_eq!(entries.len(), dim * dim);
        let mut den = Integer::from(1);
        for e in entries {
            den.lcm_mut(e.denom());
        }
        let num = entries
            .iter()
            .map(|e| Integer::from(&den / e.denom()) * e.numer())
            .collect();
        RatMatrix::from_integers(dim, num, den)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn numer(&self, i: usize, j: usize) -> &Integer {
        &self.num[i * self.dim + j]
    }

    /// The common denominator (positive, not necessarily minimal).
    pub fn denom(&self) -> &Integer {
        &self.den
    }

    /// Entry `(i, j)` as a reduced rational.
    pub fn entry(&self, i: usize, j: usize) -> Rational {
        Rational::from((self.numer(i, j).clone(), self.den.clone()))
    }

    /// Entry `(i, j)` as a ball with about `prec` bits.
    pub fn entry_ball(&self, i: usize, j: usize, prec: u32) -> Ball {
        let n = self.numer(i, j);
        if self.den == 1 {
            return Ball::from_integer(n, prec);
        }
        let wp = prec + 8;
        let (nf, ord) = Float::with_val_round(wp, n, Round::Nearest);
        let (q, err) = round_to(prec, &nf / &self.den);
        if ord == std::cmp::Ordering::Equal {
            return Ball::new(q, err);
        }
        // relative error of nf is below 2^(1−wp)
        let rel = Mag::from_abs(&q).mul(&Mag::pow2(2 - wp as i64));
        Ball::new(q, err.add(&rel))
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let d = self.dim;
        let mut num = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = Integer::new();
                for k in 0..d {
                    let a = &self.num[i * d + k];
                    let b = &rhs.num[k * d + j];
                    if *a != 0 && *b != 0 {
                        acc += a * b;
                    }
                }
                num.push(acc);
            }
        }
        RatMatrix {
            dim: d,
            num,
            den: Integer::from(&self.den * &rhs.den),
        }
    }

    /// Divides out the gcd of all entries and the denominator.
    pub fn normalize(&mut self) {
        let mut g = self.den.clone();
        for x in &self.num {
            if g == 1 {
                return;
            }
            g.gcd_mut(x);
        }
        if g > 1 {
            for x in &mut self.num {
                x.div_exact_mut(&g);
            }
            self.den.div_exact_mut(&g);
        }
    }

    /// Entry-wise equality of the represented rational matrices.
    pub fn same_value(&self, other: &RatMatrix) -> bool {
        self.dim == other.dim
            && self
                .num
                .iter()
                .zip(&other.num)
                .all(|(a, b)| Integer::from(a * &other.den) == Integer::from(b * &self.den))
    }

    /// Total size of all stored integers, in bits.
    pub fn bit_size(&self) -> u64 {
        self.num.iter().map(|x| x.significant_bits() as u64).sum::<u64>()
            + self.den.significant_bits() as u64
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.entry(i, j).to_string()).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

/// Produces the `n`-th factor `U_n` of a product.
///
/// Implementations must be deterministic and free of side effects; any
/// `Fn(u64) -> RatMatrix + Sync` qualifies.
pub trait MatrixFactory: Sync {
    fn factor(&self, n: u64) -> RatMatrix;
}

impl<F> MatrixFactory for F
where
    F: Fn(u64) -> RatMatrix + Sync,
{
    fn factor(&self, n: u64) -> RatMatrix {
        self(n)
    }
}

fn check_range(lo: u64, hi: u64) -> Result<()> {
    if lo > hi {
        return Err(Error::precondition(format!("empty range {lo}..{hi} reversed")));
    }
    Ok(())
}

fn product_rec<F: MatrixFactory + ?Sized>(f: &F, lo: u64, hi: u64, dim: usize) -> RatMatrix {
    match hi - lo {
        0 => RatMatrix::identity(dim),
        1 => f.factor(lo),
        _ => {
            let mid = lo + (hi - lo) / 2;
            let left = product_rec(f, lo, mid, dim);
            let right = product_rec(f, mid, hi, dim);
            right.mul(&left)
        }
    }
}

fn product_par<F: MatrixFactory + ?Sized>(
    f: &F,
    lo: u64,
    hi: u64,
    dim: usize,
    depth: u32,
) -> RatMatrix {
    if depth == 0 || hi - lo < 2 {
        return product_rec(f, lo, hi, dim);
    }
    let mid = lo + (hi - lo) / 2;
    let (left, right) = rayon::join(
        || product_par(f, lo, mid, dim, depth - 1),
        || product_par(f, mid, hi, dim, depth - 1),
    );
    right.mul(&left)
}

/// `U_{hi−1} ⋯ U_lo`, the identity of dimension `U_lo.dim()` for an empty range.
///
/// For an empty range the dimension is taken from `U_lo`.
pub fn bsplit_product<F: MatrixFactory + ?Sized>(f: &F, lo: u64, hi: u64) -> Result<RatMatrix> {
    check_range(lo, hi)?;
    let dim = f.factor(lo).dim();
    Ok(product_rec(f, lo, hi, dim))
}

/// Same product as [`bsplit_product`], with the top `⌈log₂ workers⌉`
/// recursion levels run concurrently. Entries are identical to the serial
/// result.
pub fn bsplit_parallel<F: MatrixFactory + ?Sized>(
    f: &F,
    lo: u64,
    hi: u64,
    workers: usize,
) -> Result<RatMatrix> {
    check_range(lo, hi)?;
    let dim = f.factor(lo).dim();
    let depth = usize::BITS - workers.max(1).saturating_sub(1).leading_zeros();
    Ok(product_par(f, lo, hi, dim, depth))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive<F: MatrixFactory>(f: &F, lo: u64, hi: u64) -> RatMatrix {
        let mut p = RatMatrix::identity(f.factor(lo).dim());
        for n in lo..hi {
            p = f.factor(n).mul(&p);
        }
        p
    }

    #[test]
    fn factorial() {
        let f = |n: u64| RatMatrix::from_integers(1, vec![Integer::from(n + 1)], Integer::from(1));
        let p = bsplit_product(&f, 0, 10).unwrap();
        assert_eq!(p.entry(0, 0), Rational::from(3628800));
        let q = bsplit_parallel(&f, 0, 10, 4).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn identity_and_singleton() {
        let id = |_: u64| RatMatrix::identity(2);
        assert!(bsplit_product(&id, 0, 100).unwrap().same_value(&RatMatrix::identity(2)));
        let f = |n: u64| {
            RatMatrix::from_rationals(
                2,
                &[
                    Rational::from((1, n + 2)),
                    Rational::from(n),
                    Rational::from(-3),
                    Rational::from((5, 7)),
                ],
            )
        };
        assert!(bsplit_product(&f, 4, 4).unwrap().same_value(&RatMatrix::identity(2)));
        assert_eq!(bsplit_product(&f, 4, 5).unwrap(), f(4));
        assert!(bsplit_product(&f, 5, 4).is_err());
    }

    #[test]
    fn hypergeometric_matches_sequential() {
        // U_n = [[x/(a+n+1), 0], [1, 1]] with a = 1/2, x = 1
        let f = |n: u64| {
            let t = Rational::from((2, 2 * n + 3));
            RatMatrix::from_rationals(
                2,
                &[t, Rational::new(), Rational::from(1), Rational::from(1)],
            )
        };
        let p = bsplit_product(&f, 0, 20).unwrap();
        assert!(p.same_value(&naive(&f, 0, 20)));
        let mut n = p.clone();
        n.normalize();
        assert!(n.same_value(&p));
    }

    #[test]
    fn entry_ball_contains() {
        let m = RatMatrix::from_integers(
            1,
            vec![Integer::from(1) << 300u32 | Integer::from(1)],
            Integer::from(3),
        );
        let b = m.entry_ball(0, 0, 64);
        assert!(b.contains_rational(&m.entry(0, 0)));
    }
}
