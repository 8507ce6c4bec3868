use proptest::prelude::*;
use rug::Rational;
use zetaburst::binsplit::{bsplit_parallel, bsplit_product, RatMatrix};

fn matrix(dim: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec((-50i64..50, 1i64..30), dim * dim).prop_map(move |v| {
        let e: Vec<Rational> = v.into_iter().map(|(n, d)| Rational::from((n, d))).collect();
        RatMatrix::from_rationals(dim, &e)
    })
}

fn factors() -> impl Strategy<Value = Vec<RatMatrix>> {
    (1usize..=3, 1usize..=500)
        .prop_flat_map(|(dim, n)| prop::collection::vec(matrix(dim), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn matches_naive_product(us in factors()) {
        let f = |n: u64| us[n as usize].clone();
        let n = us.len() as u64;
        let mut naive = RatMatrix::identity(us[0].dim());
        for u in &us {
            naive = u.mul(&naive);
        }
        let p = bsplit_product(&f, 0, n).unwrap();
        prop_assert!(p.same_value(&naive));
        let lo = n / 3;
        let mut part = RatMatrix::identity(us[0].dim());
        for u in &us[lo as usize..] {
            part = u.mul(&part);
        }
        prop_assert!(bsplit_product(&f, lo, n).unwrap().same_value(&part));
    }

    #[test]
    fn parallel_is_bit_identical(us in factors(), workers in 1usize..9) {
        let f = |n: u64| us[n as usize].clone();
        let n = us.len() as u64;
        let serial = bsplit_product(&f, 0, n).unwrap();
        prop_assert_eq!(&serial, &bsplit_parallel(&f, 0, n, workers).unwrap());
    }
}

#[test]
fn random_factory_two_hundred_eight_workers() {
    let f = |n: u64| {
        let a = Rational::from(((n * 7919 % 97) as i64 - 48, n % 13 + 1));
        let b = Rational::from((n as i64 % 5 - 2, 3));
        RatMatrix::from_rationals(2, &[a, b.clone(), Rational::from(1), b])
    };
    let s = bsplit_product(&f, 0, 200).unwrap();
    assert_eq!(s, bsplit_parallel(&f, 0, 200, 8).unwrap());
    assert_eq!(s, bsplit_parallel(&f, 0, 200, 1).unwrap());
}
