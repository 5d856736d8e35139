//! Exact rational scalars.
//!
//! `BigRational` already keeps values in lowest terms with a positive
//! denominator, so it is used directly as the ground field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `base^exp` for a non-negative exponent.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

/// `base^exp` for any integer exponent; `None` when `base` is zero and `exp < 0`.
pub fn pow_signed(base: &Rational, exp: i64) -> Option<Rational> {
    if exp >= 0 {
        Some(pow(base, exp as u32))
    } else if base.is_zero() {
        None
    } else {
        Some(pow(&base.recip(), exp.unsigned_abs() as u32))
    }
}

/// Parses `"7"`, `"-3"` or `"num/den"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Parses a comma-separated list of rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    if s.trim().is_empty() {
        return Err(Error::Parse("empty list".into()));
    }
    s.split(',').map(parse_rational).collect()
}

/// Scales a rational vector to coprime integers whose first nonzero entry is positive.
/// The zero vector is returned unchanged.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<Rational> {
    let Some(first) = v.iter().find(|x| !x.is_zero()) else {
        return v.to_vec();
    };
    let den_lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &den_lcm).to_integer()).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if first.is_negative() {
        g = -g;
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), rat(-4));
        assert_eq!(parse_rational(" 2/-4 ").unwrap(), frac(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(
            parse_rational_list("1,-1/2,3").unwrap(),
            vec![rat(1), frac(-1, 2), rat(3)]
        );
    }

    #[test]
    fn lowest_terms_invariant() {
        let r = frac(10, -4);
        assert_eq!(r.numer(), &BigInt::from(-5));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(rat(0).denom(), &BigInt::from(1));
    }

    #[test]
    fn primitive_vector_normalization() {
        let v = vec![frac(-1, 2), rat(1), frac(3, 4)];
        assert_eq!(primitive_integer_vector(&v), vec![rat(2), rat(-4), rat(-3)]);
        let z = vec![rat(0), rat(0)];
        assert_eq!(primitive_integer_vector(&z), z);
    }

    #[test]
    fn signed_powers() {
        assert_eq!(pow_signed(&rat(2), -3).unwrap(), frac(1, 8));
        assert_eq!(pow_signed(&rat(-3), 3).unwrap(), rat(-27));
        assert!(pow_signed(&rat(0), -1).is_none());
    }
}
