//! Exact rationals and their canonical text form.
//!
//! Every value crossing a file format or report boundary is a lowest-terms
//! rational rendered as `"a/b"`, or `"a"` when the denominator is 1. Parsing
//! accepts both forms and rejects floating-point literals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// Shorthand for small rational constants.
pub fn rat(numer: i64, denom: i64) -> Rat {
    assert!(denom != 0, "zero denominator");
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_u64(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Canonical text form: lowest terms, `"a"` for integers, `"a/b"` otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"a"` or `"a/b"` with optional leading minus. Rejects anything else,
/// in particular floating literals like `"0.5"` or `"1e-3"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?} (expected \"a\" or \"a/b\")"));
    if s.is_empty() {
        return Err(bad());
    }
    let parse_int = |part: &str| -> Result<BigInt> {
        if part.is_empty() || !part.chars().all(|c| c.is_ascii_digit() || c == '-') {
            return Err(bad());
        }
        part.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let numer = parse_int(n)?;
            let denom = parse_int(d)?;
            if denom.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(numer, denom))
        }
    }
}

/// Parses a rational and checks it lies in [0,1].
pub fn parse_unit_rat(s: &str) -> Result<Rat> {
    let r = parse_rat(s)?;
    if r.is_negative() || r > Rat::one() {
        return Err(Error::Parse(format!("payoff {s:?} outside [0,1]")));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_round_trip() {
        for s in ["0", "1", "-3", "1/2", "25/12", "-7/3"] {
            assert_eq!(format_rat(&parse_rat(s).unwrap()), s);
        }
    }

    #[test]
    fn reduces_to_lowest_terms() {
        assert_eq!(format_rat(&parse_rat("2/4").unwrap()), "1/2");
        assert_eq!(format_rat(&parse_rat("4/2").unwrap()), "2");
        assert_eq!(format_rat(&parse_rat("0/7").unwrap()), "0");
    }

    #[test]
    fn rejects_floats_and_garbage() {
        for s in ["0.5", "1e-3", "", "/", "1/", "/2", "1/0", "a/b", "1 / 2", "+1"] {
            assert!(parse_rat(s).is_err(), "accepted {s:?}");
        }
    }
}
