//! Bernoulli and Euler numbers from their defining recurrences.

use std::sync::{Mutex, OnceLock};

use rug::{Integer, Rational};

fn bern_cache() -> &'static Mutex<Vec<Rational>> {
    static C: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(vec![Rational::from(1)]))
}

/// `B_0, …, B_n` from `Σ_{k≤m} C(m+1, k) B_k = 0` (so `B_1 = −1/2`).
pub fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut t = bern_cache().lock().unwrap();
    while t.len() <= n {
        let m = t.len();
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (k, b) in t.iter().enumerate() {
            if *b != 0 {
                acc += Rational::from(b * &binom);
            }
            // C(m+1, k+1) from C(m+1, k)
            binom *= (m + 1 - k) as u64;
            binom /= (k + 1) as u64;
        }
        t.push(-acc / (m as u64 + 1));
    }
    t[..=n].to_vec()
}

pub fn bernoulli_recurrence(n: usize) -> Rational {
    bernoulli_table(n).pop().unwrap()
}

/// `E_0, …, E_n` with `E_m = −Σ_{k<m, k even} C(m, k) E_k` for even `m`.
pub fn euler_table(n: usize) -> Vec<Integer> {
    let mut e = vec![Integer::from(1)];
    for m in 1..=n {
        if m % 2 == 1 {
            e.push(Integer::new());
            continue;
        }
        let mut acc = Integer::new();
        let mut binom = Integer::from(1);
        for (k, ek) in e.iter().enumerate() {
            if k % 2 == 0 {
                acc += Integer::from(ek * &binom);
            }
            binom *= (m - k) as u64;
            binom /= (k + 1) as u64;
        }
        e.push(-acc);
    }
    e
}

pub fn euler_recurrence(n: usize) -> Integer {
    euler_table(n).pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bernoulli() {
        let b = bernoulli_table(12);
        assert_eq!(b[1], Rational::from((-1, 2)));
        assert_eq!(b[2], Rational::from((1, 6)));
        assert_eq!(b[3], 0);
        assert_eq!(b[12], Rational::from((-691, 2730)));
    }

    #[test]
    fn small_euler() {
        let e = euler_table(8);
        let want = [1, 0, -1, 0, 5, 0, -61, 0, 1385];
        for (a, b) in e.iter().zip(want) {
            assert_eq!(*a, b);
        }
    }
}
