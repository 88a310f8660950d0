//! Exact rational scalars. Every probability and cost in the engine is a
//! [`Rational`]; nothing downstream ever rounds.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Shorthand constructor from machine integers.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_zero() -> Rational {
    Rational::zero()
}

pub fn rat_one() -> Rational {
    Rational::one()
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Renders `num/den` with an explicit denominator even when it is 1, so the
/// on-disk format is uniform ("3/4", "1/1", "0/1").
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses "num/den" (or a bare integer) back into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = |m: String| Error::Parse {
        line: 0,
        message: m,
    };
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|e| err(format!("bad numerator {n:?}: {e}")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|e| err(format!("bad denominator {d:?}: {e}")))?;
        if d.is_zero() {
            return Err(err(format!("zero denominator in {s:?}")));
        }
        Ok(Rational::new(n, d))
    } else {
        let n: BigInt = s
            .parse()
            .map_err(|e| err(format!("bad rational {s:?}: {e}")))?;
        Ok(Rational::from(n))
    }
}

/// Lossy conversion for reporting only; never feeds back into the engine.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_positive_denominator() {
        let r = ratio(2, -4);
        assert_eq!(format_rational(&r), "-1/2");
    }

    #[test]
    fn round_trip() {
        for s in ["3/4", "0/1", "-7/3", "5"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
    }

    #[test]
    fn rejects_zero_denominator() {
        assert!(parse_rational("1/0").is_err());
    }
}
