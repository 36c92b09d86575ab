//! Exact coefficient domains.
//!
//! Every computation in this crate is generic over [`Ring`], a commutative
//! ring with exact equality. Three domains are provided:
//!
//! - [`Rationals`]: arbitrary precision fractions, always in lowest terms.
//! - [`PrimeField`]: residues modulo a prime `p`, stored in `[0, p)`.
//! - [`PolynomialRing`]: sparse polynomials over the rationals in the
//!   indeterminates `a1..aN`, used for symbolic identity checks.
//!
//! Ring elements carry no reference to their domain, so the domain object is
//! passed alongside them. The `checked_*` methods validate membership first
//! and report [`CoeffError::DomainMismatch`] for foreign elements.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

mod polynomial;
mod prime;
mod rational;

pub use polynomial::{Monomial, Polynomial, PolynomialRing};
pub use prime::PrimeField;
pub use rational::{format_rational, parse_rational, Rationals};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("domain mismatch: value does not belong to {0}")]
    DomainMismatch(DomainDescriptor),
    #[error("division by zero")]
    DivisionByZero,
    #[error("not a field")]
    NotAField,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime modulus {0} is too large (must be below 2^32)")]
    ModulusTooLarge(u64),
    #[error("polynomial ring needs at least one variable")]
    NoVariables,
    #[error("variable index {index} out of range 1..={num_vars}")]
    VariableOutOfRange { index: usize, num_vars: usize },
    #[error("length mismatch: substitution needs {expected} values, got {got}")]
    AssignmentLength { expected: usize, got: usize },
    #[error("{value} has no image in {domain}")]
    NotRepresentable {
        value: String,
        domain: DomainDescriptor,
    },
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// Names a coefficient domain.
///
/// Serializes as `"rational"`, `{"prime": p}` or `{"symbolic": num_vars}`.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum DomainDescriptor {
    #[default]
    Rational,
    Prime(u64),
    Symbolic(usize),
}

impl DomainDescriptor {
    /// Checks the descriptor's own invariants (prime modulus, at least one variable).
    pub fn validate(&self) -> Result<(), CoeffError> {
        match *self {
            DomainDescriptor::Rational => Ok(()),
            DomainDescriptor::Prime(p) => PrimeField::new(p).map(|_| ()),
            DomainDescriptor::Symbolic(n) => PolynomialRing::new(n).map(|_| ()),
        }
    }
}

impl fmt::Display for DomainDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainDescriptor::Rational => write!(f, "rational"),
            DomainDescriptor::Prime(p) => write!(f, "Z/{p}"),
            DomainDescriptor::Symbolic(n) => write!(f, "Q[a1..a{n}]"),
        }
    }
}

/// A commutative ring with identity and exact, canonical equality.
#[allow(clippy::wrong_self_convention)]
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    fn descriptor(&self) -> DomainDescriptor;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;

    /// The canonical image of an integer.
    fn from_integer(&self, n: &BigInt) -> Self::Elem;

    /// The image of a rational, if its denominator is invertible here.
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem>;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Whether every nonzero element is invertible.
    fn is_field(&self) -> bool;

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, CoeffError>;

    /// Whether `a` is a canonical element of this domain.
    fn contains(&self, a: &Self::Elem) -> bool;

    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem, CoeffError>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn from_u64(&self, n: u64) -> Self::Elem {
        self.from_integer(&BigInt::from(n))
    }

    fn from_biguint(&self, n: &BigUint) -> Self::Elem {
        self.from_integer(&BigInt::from(n.clone()))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut result = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    fn ensure(&self, a: &Self::Elem) -> Result<(), CoeffError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(CoeffError::DomainMismatch(self.descriptor()))
        }
    }

    fn checked_add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, CoeffError> {
        self.ensure(a)?;
        self.ensure(b)?;
        Ok(self.add(a, b))
    }

    fn checked_mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, CoeffError> {
        self.ensure(a)?;
        self.ensure(b)?;
        Ok(self.mul(a, b))
    }

    fn checked_neg(&self, a: &Self::Elem) -> Result<Self::Elem, CoeffError> {
        self.ensure(a)?;
        Ok(self.neg(a))
    }
}
