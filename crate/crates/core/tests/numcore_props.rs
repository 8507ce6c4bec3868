use proptest::prelude::*;
use rug::{Float, Rational};
use zetaburst::numcore::{Ball, Mag};

fn input(num: i64, den: u32, rad_exp: Option<i64>) -> Ball {
    let b = Ball::from_rational(&Rational::from((num, den.max(1))), 300);
    match rad_exp {
        Some(e) => b.add_error(&Mag::pow2(e)),
        None => b,
    }
}

type Op = fn(&Ball, &Ball, u32) -> Option<Ball>;

fn ops() -> Vec<(&'static str, Op)> {
    vec![
        ("add", |x, y, p| Some(x.add(y, p))),
        ("sub", |x, y, p| Some(x.sub(y, p))),
        ("mul", |x, y, p| Some(x.mul(y, p))),
        ("div", |x, y, p| x.div(y, p).ok()),
        ("sqrt", |x, _, p| x.abs().sqrt(p).ok()),
        ("exp", |x, _, p| Some(x.exp(p))),
        ("ln", |x, _, p| x.abs().ln(p).ok()),
        ("sin", |x, _, p| Some(x.sin(p))),
        ("cosh", |x, _, p| Some(x.cosh(p))),
        ("atan", |x, _, p| Some(x.atan(p))),
        ("pow", |x, _, p| x.abs().pow_rational(&Rational::from((-7, 3)), p).ok()),
    ]
}

proptest! {
    #[test]
    fn refinement_containment(
        a in -10_000i64..10_000, da in 1u32..1000,
        b in -10_000i64..10_000, db in 1u32..1000,
        prec in 8u32..400,
    ) {
        let x = input(a, da, None);
        let y = input(b, db, None);
        for (name, op) in ops() {
            if let (Some(lo), Some(hi)) = (op(&x, &y, prec), op(&x, &y, 2 * prec)) {
                prop_assert!(lo.contains_float(hi.mid()), "{name} at {prec}");
            }
        }
    }

    #[test]
    fn radius_monotone(
        a in -1000i64..1000, da in 1u32..100,
        b in 1i64..1000, db in 1u32..100,
        rexp in -200i64..-20,
        prec in 8u32..300,
    ) {
        let x = input(a, da, Some(rexp));
        let y = input(b, db, Some(rexp));
        for (name, op) in ops() {
            if let (Some(lo), Some(hi)) = (op(&x, &y, prec), op(&x, &y, prec + 64)) {
                let twice = lo.rad().mul(&Mag::from_u64(2));
                prop_assert!(*hi.rad() <= twice, "{name} at {prec}");
            }
        }
    }

    #[test]
    fn exact_dyadic(a in -(1i64 << 40)..(1i64 << 40), ea in -30i32..30,
                    b in -(1i64 << 20)..(1i64 << 20), eb in -30i32..30) {
        let x = Ball::exact(Float::with_val(64, a) << ea);
        let y = Ball::exact(Float::with_val(64, b) << eb);
        prop_assert!(x.add(&y, 200).is_exact());
        prop_assert!(x.sub(&y, 200).is_exact());
        prop_assert!(x.mul(&y, 64).is_exact());
        prop_assert!(x.sqr(128).is_exact());
        prop_assert!(x.mul_2exp(5).is_exact());
        let four = Ball::from_i64(4);
        prop_assert!(x.mul(&x, 128).abs().sqrt(64).is_ok());
        prop_assert!(four.sqrt(64).unwrap().is_exact());
    }
}
