//! Coefficients `f_k^(n)` of the n-fold composition `f^(n)`.
//!
//! Several independent routes are provided and are expected to agree
//! exactly with the brute-force [`TruncatedSeries::iterate`]:
//!
//! | route | function | scope |
//! |-------|----------|-------|
//! | recursion on `(k, n)` | [`coeff_recursive`] | any ring |
//! | closed form over decreasing subsets | [`coeff_closed`] | any ring |
//! | hand-expanded formulas for `k <= 5` | [`coeff_explicit_small_k`] | any ring |
//! | binomial form for `a_1 = 1` | [`coeff_schroder`] | `a_1 = 1` |
//! | quotient form of `f_2^(n)` | [`muckenhoupt_f2`] | fields, `a_1 ∉ {0, 1}` |
//!
//! Every formula shares the prefactor [`geometric_factor`]
//! `C_{k,n} = a_1^(n-1) * sum_{i=0}^{n-1} a_1^((k-1) i)` on `a_k`, always
//! evaluated as the literal sum so that it is defined in every ring.

use thiserror::Error;

use crate::coefficients::{CoeffError, Ring};
use crate::multinomial::MultinomialError;
use crate::series::{SeriesError, TruncatedSeries};

mod closed;
mod explicit;
mod identities;
mod recursive;
mod schroder;

pub use closed::{
    closed_form_terms, coeff_closed, coeff_closed_with, enumerate_subsets, level_sum,
    nested_geometric_sum, residual_closed, ClosedFormTerm, DecreasingSubset,
};
pub use explicit::coeff_explicit_small_k;
pub use identities::{
    binomial, count_closed_form_summands, nested_sum_binomial, rising_product_sum,
};
pub use recursive::{coeff_recursive, RecursiveEvaluator};
pub use schroder::coeff_schroder;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IterationError {
    #[error("insufficient truncation: need a_{k}, series has order {order}")]
    InsufficientTruncation { k: usize, order: usize },
    #[error("coefficient index k must be at least 1")]
    ZeroIndex,
    #[error("iteration count n must be at least 1")]
    ZeroIterations,
    #[error("formula undefined for a_1 in {{0, 1}}, use coeff_recursive")]
    MuckenhouptUndefined,
    #[error("Schröder requires a_1 = 1")]
    SchroderRequiresUnitA1,
    #[error("explicit formulas cover k <= 5, use coeff_closed")]
    UseClosed,
    #[error("level {alpha} out of range [2, {max}] for k = {k}")]
    LevelOutOfRange { k: usize, alpha: usize, max: usize },
    #[error("k = {0} must be at least 3")]
    KTooSmall(usize),
    #[error("alpha must be at least 1")]
    ZeroAlpha,
    #[error("identity violated: {0}")]
    IdentityViolated(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Multinomial(#[from] MultinomialError),
}

pub(crate) fn check_indices<R: Ring>(
    f: &TruncatedSeries<R>,
    k: usize,
    n: u32,
) -> Result<(), IterationError> {
    if k == 0 {
        return Err(IterationError::ZeroIndex);
    }
    if n == 0 {
        return Err(IterationError::ZeroIterations);
    }
    if k > f.order() {
        return Err(IterationError::InsufficientTruncation {
            k,
            order: f.order(),
        });
    }
    Ok(())
}

/// `C_{k,n} = a1^(n-1) * sum_{i=0}^{n-1} a1^((k-1) i)` for a given `a1`.
pub fn geometric_factor_of<R: Ring>(ring: &R, a1: &R::Elem, k: usize, n: u32) -> R::Elem {
    let step = ring.pow(a1, (k as u64).saturating_sub(1));
    let mut term = ring.one();
    let mut sum = ring.zero();
    for _ in 0..n {
        sum = ring.add(&sum, &term);
        term = ring.mul(&term, &step);
    }
    ring.mul(&ring.pow(a1, u64::from(n.saturating_sub(1))), &sum)
}

/// `C_{k,n}` for the series `f`; only `a_1` is read.
pub fn geometric_factor<R: Ring>(f: &TruncatedSeries<R>, k: usize, n: u32) -> R::Elem {
    geometric_factor_of(f.ring(), f.a1(), k, n)
}

/// `f_2^(n) = a2 (a1^(2n) - a1^n) / (a1^2 - a1)`.
pub fn muckenhoupt_f2<R: Ring>(f: &TruncatedSeries<R>, n: u32) -> Result<R::Elem, IterationError> {
    check_indices(f, 2, n)?;
    let ring = f.ring();
    if !ring.is_field() {
        return Err(CoeffError::NotAField.into());
    }
    let a1 = f.a1();
    if ring.is_zero(a1) || ring.is_one(a1) {
        return Err(IterationError::MuckenhouptUndefined);
    }
    let a1n = ring.pow(a1, u64::from(n));
    let num = ring.sub(&ring.mul(&a1n, &a1n), &a1n);
    let den = ring.sub(&ring.mul(a1, a1), a1);
    Ok(ring.mul(&ring.mul(f.coeff(2), &num), &ring.inv(&den)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{parse_rational, PolynomialRing, PrimeField, Rationals};
    use num_rational::BigRational;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn series(coeffs: &[&str], order: usize) -> TruncatedSeries<Rationals> {
        TruncatedSeries::with_order(Rationals, coeffs.iter().map(|c| q(c)).collect(), order)
            .unwrap()
    }

    #[test]
    fn geometric_factor_cases() {
        let r = Rationals;
        for k in 1..6 {
            for n in 1..8 {
                assert_eq!(geometric_factor_of(&r, &q("1"), k, n), q(&n.to_string()));
            }
        }
        assert_eq!(geometric_factor_of(&r, &q("-1"), 4, 2), q("0"));
        assert_eq!(geometric_factor_of(&r, &q("2"), 3, 2), q("10"));
        // a1 = -1 with k odd: a1^(k-1) = 1 and C = a1^(n-1) * n
        assert_eq!(geometric_factor_of(&r, &q("-1"), 3, 4), q("-4"));
    }

    #[test]
    fn geometric_factor_matches_quotient_where_defined() {
        let r = Rationals;
        for a1 in ["2", "1/2", "-3", "3"] {
            let a1 = q(a1);
            for k in 2..6u64 {
                for n in 1..7u32 {
                    let step = r.pow(&a1, k - 1);
                    let top = r.sub(&r.pow(&step, u64::from(n)), &r.one());
                    let quotient = r.mul(&top, &r.inv(&r.sub(&step, &r.one())).unwrap());
                    let expect = r.mul(&r.pow(&a1, u64::from(n - 1)), &quotient);
                    assert_eq!(geometric_factor_of(&r, &a1, k as usize, n), expect);
                }
            }
        }
    }

    #[test]
    fn muckenhoupt_examples() {
        let f = series(&["2", "1"], 4);
        assert_eq!(muckenhoupt_f2(&f, 2).unwrap(), q("6"));
        let f = series(&["3", "0", "5"], 3);
        assert_eq!(muckenhoupt_f2(&f, 4).unwrap(), q("0"));
        let f = series(&["1", "1"], 3);
        assert_eq!(
            muckenhoupt_f2(&f, 2),
            Err(IterationError::MuckenhouptUndefined)
        );
        let f = series(&["0", "1"], 3);
        assert_eq!(
            muckenhoupt_f2(&f, 2),
            Err(IterationError::MuckenhouptUndefined)
        );
        assert!(IterationError::MuckenhouptUndefined
            .to_string()
            .contains("use coeff_recursive"));
    }

    #[test]
    fn muckenhoupt_needs_a_field() {
        let r = PolynomialRing::new(2).unwrap();
        let f =
            TruncatedSeries::new(r, vec![r.variable(1).unwrap(), r.variable(2).unwrap()]).unwrap();
        assert_eq!(
            muckenhoupt_f2(&f, 2),
            Err(IterationError::Coeff(CoeffError::NotAField))
        );
    }

    #[test]
    fn muckenhoupt_in_prime_field() {
        let p = PrimeField::new(97).unwrap();
        let f = TruncatedSeries::new(p, vec![5, 11, 3]).unwrap();
        for n in 1..12 {
            let oracle = *f.iterate(n).unwrap().series.coeff(2);
            assert_eq!(muckenhoupt_f2(&f, n).unwrap(), oracle);
        }
    }
}
