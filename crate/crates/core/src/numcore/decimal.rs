//! Decimal text form of balls: `±d.ddd…e±X +/- r`.

use rug::float::Round;
use rug::{Float, Integer, Rational};

use super::ball::Ball;
use super::mag::{up, Mag, MAG_PREC};
use crate::{Error, Result};

const MAX_DECIMAL_EXP: i64 = 100_000_000;

/// Formats `x` with `digits` significant digits. The printed radius covers
/// both the ball radius and the error of the printed midpoint, so parsing
/// the output gives a ball containing `x`.
pub fn to_decimal(x: &Ball, digits: usize) -> String {
    let digits = digits.max(1);
    if !x.mid().is_finite() {
        return format!("{} +/- inf", x.mid());
    }
    let (text, err) = if x.mid().is_zero() {
        ("+0.0e+0".to_string(), Mag::zero())
    } else {
        let (neg, ds, exp) = x
            .mid()
            .to_sign_string_exp_round(10, Some(digits), Round::Nearest);
        let exp = exp.unwrap_or(0) as i64 - 1;
        let (lead, rest) = ds.split_at(1);
        let rest = if rest.is_empty() { "0" } else { rest };
        let text = format!(
            "{}{}.{}e{}{}",
            if neg { '-' } else { '+' },
            lead,
            rest,
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        );
        let printed = parse_rational(&text).expect("own output parses");
        let exact = x.mid().to_rational().expect("finite");
        let diff = Rational::from(&printed - &exact).abs();
        (text, Mag::from_upper(up(&diff)))
    };
    let r = x.rad().add(&err);
    format!("{} +/- {}", text, format_mag(&r))
}

/// Three significant digits, rounded up.
fn format_mag(r: &Mag) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    if !r.is_finite() {
        return "inf".to_string();
    }
    let (_, ds, exp) = r
        .as_float()
        .to_sign_string_exp_round(10, Some(3), Round::Up);
    let exp = exp.unwrap_or(0) as i64 - 1;
    let (lead, rest) = ds.split_at(1);
    format!(
        "{}.{}e{}{}",
        lead,
        rest,
        if exp < 0 { '-' } else { '+' },
        exp.abs()
    )
}

/// Parses a plain decimal (`-12.5`, `3e-7`, `+1.0e+3`) into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::parse(format!("malformed decimal {s:?}"));
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (s, None),
    };
    let (neg, mant) = match mant.as_bytes().first() {
        Some(b'-') => (true, &mant[1..]),
        Some(b'+') => (false, &mant[1..]),
        _ => (false, mant),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    let all_digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    if int_part.len() + frac_part.len() == 0 || !all_digits(int_part) || !all_digits(frac_part) {
        return Err(bad());
    }
    let mut e10: i64 = match exp {
        Some(t) => t.parse().map_err(|_| bad())?,
        None => 0,
    };
    if e10.abs() > MAX_DECIMAL_EXP {
        return Err(Error::resource("decimal exponent too large"));
    }
    e10 -= frac_part.len() as i64;
    let joined = format!("{int_part}{frac_part}");
    let mut n: Integer = joined.parse().map_err(|_| bad())?;
    if neg {
        n = -n;
    }
    let p = Integer::from(Integer::u_pow_u(10, e10.unsigned_abs() as u32));
    Ok(if e10 >= 0 {
        Rational::from(n * p)
    } else {
        Rational::from((n, p))
    })
}

/// Parses `x`, `x +/- r` or `x ± r` into a ball containing the described set.
pub fn parse_decimal(s: &str, prec: u32) -> Result<Ball> {
    let (mid, rad) = match s.split_once("+/-").or_else(|| s.split_once('±')) {
        Some((m, r)) => (m, Some(r)),
        None => (s, None),
    };
    let q = parse_rational(mid)?;
    let mut b = Ball::from_rational(&q, prec);
    if let Some(r) = rad {
        let r = r.trim();
        let m = if r == "inf" {
            Mag::inf()
        } else {
            let rq = parse_rational(r)?;
            if rq < 0 {
                return Err(Error::parse("negative radius"));
            }
            Mag::from_upper(Float::with_val_round(MAG_PREC, &rq, Round::Up).0)
        };
        b = b.add_error(&m);
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_shape() {
        let s = to_decimal(&Ball::from_i64(-1234), 6);
        assert_eq!(s, "-1.23400e+3 +/- 0");
        let s = to_decimal(&Ball::from_rational(&Rational::from((1, 3)), 64), 5);
        assert!(s.starts_with("+3.3333e-1 +/- "));
    }

    #[test]
    fn round_trip_contains() {
        let x = Ball::from_rational(&Rational::from((22, 7)), 200).add_error(&Mag::pow2(-150));
        for d in [1, 3, 10, 50, 80] {
            let y = parse_decimal(&to_decimal(&x, d), 64).unwrap();
            assert!(y.contains(&x), "digits {d}");
        }
    }

    #[test]
    fn parse_variants() {
        assert_eq!(parse_rational("1.5e2").unwrap(), Rational::from(150));
        assert_eq!(parse_rational("-.25").unwrap(), Rational::from((-1, 4)));
        assert_eq!(parse_rational("7").unwrap(), Rational::from(7));
        assert!(parse_rational("1.2.3").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("abc").is_err());
        let b = parse_decimal("2 ± 0.5", 64).unwrap();
        assert!(b.contains_rational(&Rational::from((5, 2))));
    }
}
