//! Exact rational scalars and the `"p/q"` wire representation.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or plain `"p"` (optionally signed) into a rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Input(format!("malformed rational {s:?}, expected \"p\" or \"p/q\""));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::Input(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// Formats a rational as `"p"` (integers) or `"p/q"` in lowest terms.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat_vec(ss: &[String]) -> Result<Vec<Rat>> {
    ss.iter().map(|s| parse_rat(s)).collect()
}

pub fn fmt_rat_vec(rs: &[Rat]) -> Vec<String> {
    rs.iter().map(fmt_rat).collect()
}

/// Nearest integer, ties rounded up. The result `n` satisfies `|r - n| <= 1/2`.
pub fn round_nearest(r: &Rat) -> BigInt {
    (r + rat(1, 2)).floor().to_integer()
}

/// True when `r` is a half-integer (`2r` integral).
pub fn is_half_integer(r: &Rat) -> bool {
    (r * rat_i(2)).is_integer()
}

/// Sum of a slice of rationals.
pub fn rat_sum<'a, I: IntoIterator<Item = &'a Rat>>(it: I) -> Rat {
    it.into_iter().fold(Rat::zero(), |acc, x| acc + x)
}

/// Dot product of an integer vector with a rational vector.
pub fn dot_iv(m: &[i64], z: &[Rat]) -> Rat {
    debug_assert_eq!(m.len(), z.len());
    m.iter()
        .zip(z)
        .fold(Rat::zero(), |acc, (mi, zi)| acc + zi * rat_i(*mi))
}

/// Dot product of two rational vectors.
pub fn dot_vv(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// Componentwise `a + b`.
pub fn add_vv(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Componentwise `a - b`.
pub fn sub_vv(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Scales a rational vector.
pub fn scale_v(a: &[Rat], s: &Rat) -> Vec<Rat> {
    a.iter().map(|x| x * s).collect()
}

pub fn abs_rat(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "-3", "7/2", "-22/7", "1000000000000000000000/3"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(fmt_rat(&r), s);
        }
        assert_eq!(fmt_rat(&parse_rat("4/2").unwrap()), "2");
        assert_eq!(fmt_rat(&parse_rat(" -6/4 ").unwrap()), "-3/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a/b").is_err());
        assert!(parse_rat("").is_err());
    }

    #[test]
    fn rounding() {
        assert_eq!(round_nearest(&rat(3, 2)), BigInt::from(2));
        assert_eq!(round_nearest(&rat(-3, 2)), BigInt::from(-1));
        assert_eq!(round_nearest(&rat(7, 5)), BigInt::from(1));
        assert_eq!(round_nearest(&rat(-7, 5)), BigInt::from(-1));
    }
}
