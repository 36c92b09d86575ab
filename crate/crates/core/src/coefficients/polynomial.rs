use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{format_rational, parse_rational, CoeffError, DomainDescriptor, Ring};

/// Exponent vector of `a1^e1 * a2^e2 * ...`, without trailing zeros.
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// of `a1`, then `a2`, and so on.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exponents: Vec<u32>) -> Self {
        while exponents.last() == Some(&0) {
            exponents.pop();
        }
        Monomial(exponents)
    }

    /// The single variable `a_index` (1-based).
    pub fn variable(index: usize) -> Self {
        let mut e = vec![0; index];
        e[index - 1] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Exponent of `a_index` (1-based).
    pub fn exponent(&self, index: usize) -> u32 {
        self.0.get(index - 1).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn num_vars_used(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.0.len() >= other.0.len() {
            (&self.0, &other.0)
        } else {
            (&other.0, &self.0)
        };
        let mut e = long.clone();
        for (x, y) in e.iter_mut().zip(short) {
            *x += y;
        }
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // trailing zeros are trimmed, so Vec's lexicographic order matches
        // the zero-padded comparison
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "a{}", i + 1)?;
            } else {
                write!(f, "a{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial with rational coefficients; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Polynomial::from_terms([(Monomial::one(), c)])
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        Polynomial::from_terms([(m, c)])
    }

    /// Builds a canonical polynomial, merging repeated monomials.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(terms: I) -> Self {
        let mut map: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in terms {
            add_term(&mut map, m, c);
        }
        Polynomial { terms: map }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Largest exponent of `a_index` over all terms (0 for the zero polynomial).
    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent(index))
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Number of leading variables any term mentions.
    pub fn num_vars_used(&self) -> usize {
        self.terms
            .keys()
            .map(Monomial::num_vars_used)
            .max()
            .unwrap_or(0)
    }

    fn add(&self, other: &Polynomial) -> Polynomial {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        Polynomial { terms }
    }

    fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                add_term(&mut terms, m1.mul(m2), c1 * c2);
            }
        }
        Polynomial { terms }
    }
}

fn add_term(map: &mut BTreeMap<Monomial, BigRational>, m: Monomial, c: BigRational) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&m) {
        Some(existing) => {
            *existing += c;
            if existing.is_zero() {
                map.remove(&m);
            }
        }
        None => {
            map.insert(m, c);
        }
    }
}

/// Prints in descending graded-lex order, e.g. `2*a1^3*a2 - a2 + 1/2*a4`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (i == 0, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), m)?;
            }
        }
        Ok(())
    }
}

/// `Q[a1, ..., aN]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PolynomialRing {
    num_vars: usize,
}

impl PolynomialRing {
    pub fn new(num_vars: usize) -> Result<Self, CoeffError> {
        if num_vars == 0 {
            return Err(CoeffError::NoVariables);
        }
        Ok(PolynomialRing { num_vars })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// The indeterminate `a_index`, 1-based.
    pub fn variable(&self, index: usize) -> Result<Polynomial, CoeffError> {
        if index == 0 || index > self.num_vars {
            return Err(CoeffError::VariableOutOfRange {
                index,
                num_vars: self.num_vars,
            });
        }
        Ok(Polynomial::monomial(
            Monomial::variable(index),
            BigRational::one(),
        ))
    }

    /// Evaluates `p` at `a_i = assignment[i - 1]` in the target ring.
    pub fn substitute<T: Ring>(
        &self,
        p: &Polynomial,
        assignment: &[T::Elem],
        target: &T,
    ) -> Result<T::Elem, CoeffError> {
        if assignment.len() != self.num_vars {
            return Err(CoeffError::AssignmentLength {
                expected: self.num_vars,
                got: assignment.len(),
            });
        }
        self.ensure(p)?;
        let mut acc = target.zero();
        for (m, c) in p.terms() {
            let mut term = target
                .from_rational(c)
                .ok_or_else(|| CoeffError::NotRepresentable {
                    value: format_rational(c),
                    domain: target.descriptor(),
                })?;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term = target.mul(&term, &target.pow(&assignment[i], u64::from(e)));
                }
            }
            acc = target.add(&acc, &term);
        }
        Ok(acc)
    }

    fn parse_term(&self, input: &str, term: &str) -> Result<Polynomial, CoeffError> {
        let err = |reason: String| CoeffError::Parse {
            input: input.to_string(),
            reason,
        };
        let mut coeff = BigRational::one();
        let mut exps = vec![0u32; self.num_vars];
        for factor in term.split('*') {
            let factor = factor.trim();
            if factor.is_empty() {
                return Err(err(format!("empty factor in term {term:?}")));
            }
            if let Some(rest) = factor.strip_prefix('a') {
                let (idx, exp) = match rest.split_once('^') {
                    Some((i, e)) => (i, e),
                    None => (rest, "1"),
                };
                let idx: usize = idx
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad variable {factor:?}")))?;
                let exp: u32 = exp
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad exponent in {factor:?}")))?;
                if idx == 0 || idx > self.num_vars {
                    return Err(CoeffError::VariableOutOfRange {
                        index: idx,
                        num_vars: self.num_vars,
                    });
                }
                exps[idx - 1] += exp;
            } else {
                coeff *= parse_rational(factor)
                    .map_err(|_| err(format!("bad coefficient {factor:?}")))?;
            }
        }
        Ok(Polynomial::monomial(Monomial::new(exps), coeff))
    }
}

impl Ring for PolynomialRing {
    type Elem = Polynomial;

    fn descriptor(&self) -> DomainDescriptor {
        DomainDescriptor::Symbolic(self.num_vars)
    }

    fn zero(&self) -> Polynomial {
        Polynomial::zero()
    }

    fn one(&self) -> Polynomial {
        Polynomial::constant(BigRational::one())
    }

    fn from_integer(&self, n: &BigInt) -> Polynomial {
        Polynomial::constant(BigRational::from_integer(n.clone()))
    }

    fn from_rational(&self, q: &BigRational) -> Option<Polynomial> {
        Some(Polynomial::constant(q.clone()))
    }

    fn add(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a.add(b)
    }

    fn neg(&self, a: &Polynomial) -> Polynomial {
        a.neg()
    }

    fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a.mul(b)
    }

    fn is_zero(&self, a: &Polynomial) -> bool {
        a.is_zero()
    }

    fn is_field(&self) -> bool {
        false
    }

    fn inv(&self, _a: &Polynomial) -> Result<Polynomial, CoeffError> {
        Err(CoeffError::NotAField)
    }

    fn contains(&self, a: &Polynomial) -> bool {
        a.num_vars_used() <= self.num_vars
            && a.terms().all(|(m, c)| {
                !c.is_zero() && m.exponents().last() != Some(&0) && super::Rationals.contains(c)
            })
    }

    fn format(&self, a: &Polynomial) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<Polynomial, CoeffError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(CoeffError::Parse {
                input: s.to_string(),
                reason: "empty polynomial".to_string(),
            });
        }
        // split into signed terms; a sign directly after an operator belongs to a literal
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            let splits = (ch == '+' || ch == '-')
                && !matches!(prev, None | Some('*') | Some('/') | Some('^'));
            if splits {
                terms.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            } else if (ch == '+' || ch == '-') && prev.is_none() {
                negative = ch == '-';
            } else {
                current.push(ch);
            }
            prev = Some(ch);
        }
        terms.push((negative, current));
        let mut acc = Polynomial::zero();
        for (neg, term) in terms {
            if term.is_empty() {
                return Err(CoeffError::Parse {
                    input: s.to_string(),
                    reason: "empty term".to_string(),
                });
            }
            let t = self.parse_term(s, &term)?;
            acc = if neg { acc.add(&t.neg()) } else { acc.add(&t) };
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: usize) -> PolynomialRing {
        PolynomialRing::new(n).unwrap()
    }

    #[test]
    fn variable_products() {
        let r = ring(3);
        let a1 = r.variable(1).unwrap();
        let sq = r.mul(&a1, &a1);
        assert_eq!(sq.terms().next().unwrap().0.exponents(), &[2]);
        assert_eq!(sq.to_string(), "a1^2");
        assert_eq!(r.variable(3).unwrap().to_string(), "a3");
        assert_eq!(
            r.variable(0),
            Err(CoeffError::VariableOutOfRange {
                index: 0,
                num_vars: 3
            })
        );
        assert!(r.variable(4).is_err());
    }

    #[test]
    fn not_a_field() {
        let r = ring(2);
        assert_eq!(r.inv(&r.variable(2).unwrap()), Err(CoeffError::NotAField));
        assert_eq!(CoeffError::NotAField.to_string(), "not a field");
    }

    #[test]
    fn graded_lex_printing() {
        let r = ring(4);
        let p = r.parse("1/2*a4 + 2*a1^3*a2").unwrap();
        assert_eq!(p.to_string(), "2*a1^3*a2 + 1/2*a4");
        let q = r.parse("a2*a1 - a1^2 + 3 - a3").unwrap();
        assert_eq!(q.to_string(), "-a1^2 + a1*a2 - a3 + 3");
        assert_eq!(r.parse("a1 - a1").unwrap().to_string(), "0");
        assert_eq!(r.parse("-1/3*a2^2").unwrap().to_string(), "-1/3*a2^2");
    }

    #[test]
    fn parse_errors() {
        let r = ring(2);
        assert!(r.parse("").is_err());
        assert!(r.parse("a1 +").is_err());
        assert!(r.parse("a3").is_err());
        assert!(r.parse("2**a1").is_err());
        assert!(r.parse("b1").is_err());
    }

    #[test]
    fn substitution_examples() {
        let r = ring(2);
        let q = super::super::Rationals;
        let p = r.parse("2*a1*a2").unwrap();
        let v = [BigRational::from_integer(3.into()), BigRational::zero()];
        assert!(r.substitute(&p, &v, &q).unwrap().is_zero());

        let r1 = ring(1);
        let p = r1.parse("a1^2").unwrap();
        let half = parse_rational("1/2").unwrap();
        assert_eq!(
            r1.substitute(&p, &[half], &q).unwrap(),
            parse_rational("1/4").unwrap()
        );

        let p = r.parse("a1 + a2").unwrap();
        assert_eq!(
            r.substitute(&p, &[BigRational::from_integer(5.into())], &q),
            Err(CoeffError::AssignmentLength {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn monomial_order() {
        let a = Monomial::new(vec![0, 2]);
        let b = Monomial::new(vec![1, 1]);
        let c = Monomial::new(vec![0, 0, 1]);
        assert!(b > a);
        assert!(a > c);
        assert_eq!(Monomial::new(vec![1, 0, 0]), Monomial::variable(1));
    }
}
