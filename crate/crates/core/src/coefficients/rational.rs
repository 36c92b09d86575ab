use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{CoeffError, DomainDescriptor, Ring};

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

/// Parses `"p/q"` or `"p"` into a reduced fraction.
pub fn parse_rational(s: &str) -> Result<BigRational, CoeffError> {
    let err = |reason: &str| CoeffError::Parse {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let num: BigInt = num.parse().map_err(|_| err("invalid integer"))?;
    let den: BigInt = match den {
        Some(d) => d.parse().map_err(|_| err("invalid denominator"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// Prints `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl Ring for Rationals {
    type Elem = BigRational;

    fn descriptor(&self) -> DomainDescriptor {
        DomainDescriptor::Rational
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_integer(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }

    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn is_field(&self) -> bool {
        true
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational, CoeffError> {
        if a.is_zero() {
            Err(CoeffError::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }

    fn contains(&self, a: &BigRational) -> bool {
        a.denom().is_positive() && a.numer().gcd(a.denom()).is_one()
    }

    fn format(&self, a: &BigRational) -> String {
        format_rational(a)
    }

    fn parse(&self, s: &str) -> Result<BigRational, CoeffError> {
        parse_rational(s)
    }
}
