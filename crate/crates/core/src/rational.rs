//! Small helpers around arbitrary-precision rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` (whitespace tolerated).
pub fn parse(s: &str) -> Result<Rational> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Parse(format!("empty rational {s:?}")));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        let d = BigInt::from_str(d).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rational::new(n, d))
    } else {
        let n = BigInt::from_str(&t).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        Ok(Rational::from_integer(n))
    }
}

/// Canonical string form: `"p"` for integers, `"p/q"` otherwise.
pub fn format(q: &Rational) -> String {
    q.to_string()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, q| num_integer::Integer::lcm(&acc, q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse(" -4 ").unwrap(), int(-4));
        assert_eq!(format(&frac(-2, 4)), "-1/2");
        assert_eq!(format(&int(7)), "7");
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn lcm_of_denominators() {
        let v = [frac(1, 4), frac(1, 6), int(3)];
        assert_eq!(common_denominator(v.iter()), BigInt::from(12));
    }
}
