use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{parse_rational, CoeffError, DomainDescriptor, Ring};

/// The prime field `Z/p`; elements are residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, CoeffError> {
        if p > u64::from(u32::MAX) {
            return Err(CoeffError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(CoeffError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn reduce(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    /// Multiplicative order of a nonzero residue.
    pub fn order_of(&self, a: u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            return None;
        }
        let mut x = a % self.p;
        let mut ord = 1;
        while x != 1 {
            x = self.mul(&x, &a);
            ord += 1;
        }
        Some(ord)
    }

    /// The smallest generator of the multiplicative group.
    pub fn primitive_root(&self) -> u64 {
        if self.p == 2 {
            return 1;
        }
        (2..self.p)
            .find(|&g| self.order_of(g) == Some(self.p - 1))
            .expect("multiplicative group of a prime field is cyclic")
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn descriptor(&self) -> DomainDescriptor {
        DomainDescriptor::Prime(self.p)
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn from_integer(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p))
            .to_u64()
            .expect("residue fits in u64")
    }

    fn from_rational(&self, q: &BigRational) -> Option<u64> {
        let den = self.from_integer(q.denom());
        if den == 0 {
            return None;
        }
        let num = self.from_integer(q.numer());
        Some(self.mul(&num, &self.inv(&den).ok()?))
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }

    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((u128::from(*a) * u128::from(*b)) % u128::from(self.p)) as u64
    }

    fn is_field(&self) -> bool {
        true
    }

    fn inv(&self, a: &u64) -> Result<u64, CoeffError> {
        if (*a).is_multiple_of(self.p) {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(self.pow(a, self.p - 2))
    }

    fn contains(&self, a: &u64) -> bool {
        *a < self.p
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<u64, CoeffError> {
        let q = parse_rational(s)?;
        self.from_rational(&q)
            .ok_or_else(|| CoeffError::NotRepresentable {
                value: s.trim().to_string(),
                domain: self.descriptor(),
            })
    }
}
