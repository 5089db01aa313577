//! Exact rational scalars.
//!
//! All coefficients in the engine are [`Rational`]s: arbitrary-precision
//! numerator over a positive denominator, always kept in lowest terms.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;

pub type Rational = num_rational::BigRational;

/// `p/q` as a [`Rational`]. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `"p"`, `"-p"` or `"p/q"` with decimal integers.
///
/// Stricter than `BigRational::from_str`: no embedded whitespace, no `+`
/// sign on the denominator and no zero denominator.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let bad = || ParseError::Rational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits_ok = |t: &str, allow_sign: bool| {
        let t = if allow_sign {
            t.strip_prefix('-').or_else(|| t.strip_prefix('+')).unwrap_or(t)
        } else {
            t
        };
        !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits_ok(num, true) {
        return Err(bad());
    }
    let n = BigInt::from_str(num).map_err(|_| bad())?;
    let d = match den {
        Some(d) => {
            if !digits_ok(d, false) {
                return Err(bad());
            }
            BigInt::from_str(d).map_err(|_| bad())?
        }
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Prime factors of a positive integer by trial division.
pub fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            out.push(p.clone());
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/41").unwrap(), rat(6, 41));
        assert_eq!(parse_rational("-12/8").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("24").unwrap(), int(24));
        assert_eq!(format_rational(&rat(-3, 2)), "-3/2");
        assert_eq!(format_rational(&rat(10, 5)), "2");
        assert_eq!(format_rational(&int(0)), "0");
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "1/0", "1/", "/2", "1/-2", " 1", "1 /2", "1.5", "--1", "+"] {
            assert!(parse_rational(s).is_err(), "{s:?} should not parse");
        }
    }

    #[test]
    fn normalization() {
        let r = rat(4, -6);
        assert_eq!(r.numer(), &BigInt::from(-2));
        assert_eq!(r.denom(), &BigInt::from(3));
        assert!(rat(0, 7).denom().is_one());
    }

    #[test]
    fn factors() {
        let f = prime_factors(&BigInt::from(196883));
        assert_eq!(f, vec![BigInt::from(47), BigInt::from(59), BigInt::from(71)]);
        assert_eq!(prime_factors(&BigInt::from(852)).len(), 3);
    }
}
