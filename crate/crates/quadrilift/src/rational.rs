//! Exact rationals: strict parsing/formatting and p-adic valuations.
//!
//! The canonical textual form is `"n"` or `"n/d"` with `d > 0` and
//! `gcd(n, d) = 1`; parsing accepts any integer pair and reduces. Valuations
//! are the usual `v_p(n/d) = v_p(n) − v_p(d)`.

use crate::arith::square_free_bigint;
use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Exact rational number, always stored reduced with positive denominator.
pub type Rational = BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The fraction `n/d` as a rational (`d ≠ 0`).
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse `"n"` or `"n/d"` (optional leading `-`, no whitespace inside).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    let parse_int = |u: &str| -> Result<BigInt> {
        u.parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("bad integer {u:?} in rational {t:?}")))
    };
    match t.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(t)?)),
        Some((n, d)) => {
            let num = parse_int(n)?;
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {t:?}")));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Canonical string form: `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serde adapter for `Rational` fields, transported as exact strings
/// (`"-3/2"`) to avoid any numeric ambiguity. Use with
/// `#[serde(with = "crate::rational::rational_string")]`.
pub mod rational_string {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }
}

/// p-adic valuation of a nonzero integer.
pub fn valuation_int(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0i64;
    while (&m % &p).is_zero() {
        m /= &p;
        v += 1;
    }
    v
}

/// p-adic valuation `v_p(x)` of a nonzero rational; errors on zero.
pub fn valuation(x: &Rational, p: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroArgument("valuation of 0 is undefined"));
    }
    if !crate::arith::is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(valuation_int(x.numer(), p) - valuation_int(x.denom(), p))
}

/// The unit part `x / p^{v_p(x)}`: a rational with zero valuation at `p`.
pub fn unit_part(x: &Rational, p: u64) -> Result<Rational> {
    let v = valuation(x, p)?;
    let pb = BigInt::from(p);
    let scale = if v >= 0 {
        Rational::new(BigInt::one(), pb.pow(v as u32))
    } else {
        Rational::from_integer(pb.pow((-v) as u32))
    };
    Ok(x * scale)
}

/// Square-free representative of the square class of a nonzero rational:
/// the square-free part of `numer · denom` (same class, since
/// `n/d = n·d / d²`), carrying the sign.
pub fn square_free_part(x: &Rational) -> BigInt {
    debug_assert!(!x.is_zero());
    square_free_bigint(&(x.numer() * x.denom()))
}

/// Whether a rational is a nonzero perfect square in ℚ.
pub fn is_rational_square(x: &Rational) -> bool {
    !x.is_zero() && square_free_part(x).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(format_rational(&parse_rational("3/6").unwrap()), "1/2");
        assert_eq!(format_rational(&parse_rational("-4/2").unwrap()), "-2");
        assert_eq!(format_rational(&parse_rational("7").unwrap()), "7");
        assert_eq!(format_rational(&parse_rational("5/-3").unwrap()), "-5/3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&rat(12), 2).unwrap(), 2);
        assert_eq!(valuation(&rat(1), 5).unwrap(), 0);
        assert_eq!(valuation(&ratio(9, 20), 5).unwrap(), -1);
        assert_eq!(valuation(&ratio(9, 20), 3).unwrap(), 2);
        assert!(valuation(&rat(0), 3).is_err());
        assert!(valuation(&rat(3), 4).is_err());
    }

    #[test]
    fn unit_parts() {
        assert_eq!(unit_part(&rat(12), 2).unwrap(), rat(3));
        assert_eq!(unit_part(&ratio(9, 20), 5).unwrap(), ratio(9, 4));
        assert_eq!(valuation(&unit_part(&ratio(-8, 3), 2).unwrap(), 2).unwrap(), 0);
    }

    #[test]
    fn square_classes() {
        assert_eq!(square_free_part(&rat(18)), BigInt::from(2));
        assert_eq!(square_free_part(&ratio(1, 2)), BigInt::from(2));
        assert_eq!(square_free_part(&ratio(-9, 4)), BigInt::from(-1));
        assert!(is_rational_square(&ratio(49, 16)));
        assert!(!is_rational_square(&rat(-4)));
        assert!(!is_rational_square(&rat(8)));
    }
}
