//! Exact rational scalars and small vector helpers.
//!
//! Everything in this crate computes over arbitrary-precision rationals; there
//! are no floating-point numbers anywhere on the result path.  Rationals cross
//! the JSON boundary as strings: `"p/q"` with `q` omitted when it is 1.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::{Error, Result};

/// The scalar type used throughout: an always-reduced big rational.
pub type Rat = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Builds a rational from a numerator/denominator pair.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Converts an integer slice into rational coordinates.
pub fn rat_vec(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&n| rat(n)).collect()
}

/// Parses `"p/q"`, `"p"`, or an optional leading sign into a rational.
///
/// The denominator must be nonzero; whitespace is not accepted.  `field` is
/// used to produce a diagnostic that names the offending input location.
pub fn parse_rat(s: &str, field: &str) -> Result<Rat> {
    let bad = || Error::input(format!("{field}: invalid rational {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(Error::input(format!("{field}: zero denominator in {s:?}")));
    }
    Ok(Rat::new(p, q))
}

/// Formats a rational canonically: reduced, sign on the numerator, `"p"` for
/// integers and `"p/q"` otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact dot product of two equal-length coordinate vectors.
pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// `a + c * b`, written out to avoid intermediate allocations in hot paths.
pub fn add_scaled(a: &[Rat], c: &Rat, b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + c * y).collect()
}

pub fn scale(c: &Rat, v: &[Rat]) -> Vec<Rat> {
    v.iter().map(|x| c * x).collect()
}

pub fn negate(v: &[Rat]) -> Vec<Rat> {
    v.iter().map(|x| -x).collect()
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Rat::is_zero)
}

/// Clears denominators and divides by the content, returning the unique
/// primitive integer vector that is a positive multiple of `v`.
///
/// Errors on the zero vector, which has no primitive representative.
pub fn primitive_integer(v: &[Rat], field: &str) -> Result<Vec<BigInt>> {
    if is_zero_vec(v) {
        return Err(Error::input(format!("{field}: zero vector has no primitive ray")));
    }
    let mut lcm = BigInt::one();
    for x in v {
        lcm = num::integer::lcm(lcm, x.denom().clone());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * &lcm / x.denom()).collect();
    let mut gcd = BigInt::zero();
    for n in &ints {
        gcd = num::integer::gcd(gcd, n.abs());
    }
    Ok(ints.iter().map(|n| n / &gcd).collect())
}

/// Integer vector back to rational coordinates.
pub fn from_integers(v: &[BigInt]) -> Vec<Rat> {
    v.iter().map(|n| Rat::from_integer(n.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "5", "-3", "2/3", "-7/2"] {
            let r = parse_rat(s, "t").unwrap();
            assert_eq!(format_rat(&r), s);
        }
        // Non-canonical inputs normalize.
        assert_eq!(format_rat(&parse_rat("4/6", "t").unwrap()), "2/3");
        assert_eq!(format_rat(&parse_rat("3/-6", "t").unwrap()), "-1/2");
        assert_eq!(format_rat(&parse_rat("8/4", "t").unwrap()), "2");
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "1/0", "1.5", "a", "1/ 2", "--3"] {
            assert!(parse_rat(s, "t").is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn primitive_vector() {
        let v = vec![ratio(1, 2), ratio(1, 3), rat(0)];
        let p = primitive_integer(&v, "t").unwrap();
        assert_eq!(p, vec![BigInt::from(3), BigInt::from(2), BigInt::from(0)]);
        // Orientation is preserved: only positive rescaling.
        let v = vec![rat(-4), rat(6)];
        let p = primitive_integer(&v, "t").unwrap();
        assert_eq!(p, vec![BigInt::from(-2), BigInt::from(3)]);
        assert!(primitive_integer(&[rat(0)], "t").is_err());
    }
}
