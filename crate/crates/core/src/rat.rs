//! Arbitrary-precision rational numbers.
//!
//! `Rat` is `num_rational::BigRational`: always stored in lowest terms with a
//! positive denominator, and all arithmetic is exact. This module adds the
//! small constructors and the `"p/q"` text form shared by every file format
//! and CLI flag in the project.

use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rat = num_rational::BigRational;

pub fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// `num/den` with `den > 0` enforced by `BigRational::new` (it normalizes
/// signs and reduces). Panics on a zero denominator; use [`parse_rat`] for
/// untrusted input.
pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_zero(r: &Rat) -> bool {
    r.is_zero()
}

/// Parses the shared entry encoding: an optionally signed integer, or
/// `"p/q"` with `q > 0` and `gcd(|p|, q) = 1`.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| alloc::format!("invalid numerator in {s:?}"))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| alloc::format!("invalid denominator in {s:?}"))?;
        if den.is_zero() {
            return Err(alloc::format!("zero denominator in {s:?}"));
        }
        if den.is_negative() {
            return Err(alloc::format!("denominator must be positive in {s:?}"));
        }
        let r = Rat::new(num.clone(), den.clone());
        if r.numer() != &num || r.denom() != &den {
            return Err(alloc::format!("{s:?} is not in lowest terms"));
        }
        Ok(r)
    } else {
        let num: BigInt = s
            .parse()
            .map_err(|_| alloc::format!("invalid integer {s:?}"))?;
        Ok(Rat::from_integer(num))
    }
}

/// Formats a rational in the shared entry encoding (`"p"` or `"p/q"`).
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "-3", "1/2", "-7/3", "16/49"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("1/-2").is_err());
        assert!(parse_rat("2/4").is_err());
        assert!(parse_rat("0.5").is_err());
        assert!(parse_rat("a").is_err());
    }

    #[test]
    fn exactness() {
        let third = ratio(1, 3);
        let sum = &third + &third + &third;
        assert_eq!(sum, int(1));
    }
}
