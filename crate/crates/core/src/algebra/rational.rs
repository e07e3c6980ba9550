//! Arbitrary-precision rationals.
//!
//! `BigRational` already keeps the denominator positive and the fraction
//! reduced, so it is used directly as the scalar type.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{FmError, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn binomial(n: i64, k: u32) -> Rational {
    // generalized binomial coefficient binom(n, k) for any integer n
    let mut acc = Rational::one();
    for j in 0..k as i64 {
        acc = acc * rat(n - j) / rat(j + 1);
    }
    acc
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |a, b| a * BigInt::from(b))
}

/// gcd of numerators and lcm of denominators, used to make rational vectors
/// primitive-integral.
pub fn content_of<'a>(it: impl Iterator<Item = &'a Rational>) -> Rational {
    let mut g = BigInt::zero();
    let mut l = BigInt::one();
    for c in it {
        g = g.gcd(c.numer());
        l = l.lcm(c.denom());
    }
    if g.is_zero() {
        Rational::one()
    } else {
        Rational::new(g, l)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || FmError::Parse(format!("bad rational '{s}'"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(FmError::ZeroDenominator);
        }
        Ok(Rational::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(n))
    }
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_neg(r: &Rational) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generalized_binomials() {
        assert_eq!(binomial(-2, 1), rat(-2));
        assert_eq!(binomial(-2, 2), rat(3));
        assert_eq!(binomial(5, 2), rat(10));
        assert_eq!(binomial(3, 5), rat(0));
    }

    #[test]
    fn parse_and_format() {
        let r = parse_rational("-6/4").unwrap();
        assert_eq!(r, frac(-3, 2));
        assert_eq!(fmt_rational(&r), "-3/2");
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn content_is_gcd_over_lcm() {
        let v = [frac(2, 3), frac(4, 5)];
        assert_eq!(content_of(v.iter()), frac(2, 15));
    }
}
