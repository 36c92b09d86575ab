use std::collections::HashMap;

use crate::coefficients::Ring;
use crate::series::TruncatedSeries;

use super::{check_indices, geometric_factor, IterationError};

/// Memoized evaluator for
///
/// ```text
/// f_k^(n) = a_k C_{k,n} + sum_{i=0}^{n-2} a1^(k i) sum_{j=2}^{k-1} f_j^(n-i-1) a_k^[j]
/// ```
///
/// The power coefficients `a_k^[j]` come from repeated series
/// multiplication, not from the multinomial table.
pub struct RecursiveEvaluator<'a, R: Ring> {
    f: &'a TruncatedSeries<R>,
    powers: Vec<TruncatedSeries<R>>,
    memo: HashMap<(usize, u32), R::Elem>,
}

impl<'a, R: Ring> RecursiveEvaluator<'a, R> {
    pub fn new(f: &'a TruncatedSeries<R>) -> Self {
        let mut powers = vec![f.clone()];
        for _ in 2..f.order() {
            let next = powers
                .last()
                .expect("non-empty")
                .mul(f)
                .expect("same ring and order");
            powers.push(next);
        }
        RecursiveEvaluator {
            f,
            powers,
            memo: HashMap::new(),
        }
    }

    // a_k^[j]
    fn power_coeff(&self, k: usize, j: usize) -> &R::Elem {
        self.powers[j - 1].coeff(k)
    }

    pub fn coeff(&mut self, k: usize, n: u32) -> Result<R::Elem, IterationError> {
        check_indices(self.f, k, n)?;
        Ok(self.eval(k, n))
    }

    fn eval(&mut self, k: usize, n: u32) -> R::Elem {
        if let Some(v) = self.memo.get(&(k, n)) {
            return v.clone();
        }
        let ring = self.f.ring().clone();
        let a1 = self.f.a1().clone();
        let value = if n == 1 {
            self.f.coeff(k).clone()
        } else if k == 1 {
            ring.pow(&a1, u64::from(n))
        } else {
            let mut value = ring.mul(self.f.coeff(k), &geometric_factor(self.f, k, n));
            let a1k = ring.pow(&a1, k as u64);
            let mut weight = ring.one();
            for i in 0..n - 1 {
                let mut inner = ring.zero();
                for j in 2..k {
                    let akj = self.power_coeff(k, j).clone();
                    if ring.is_zero(&akj) {
                        continue;
                    }
                    let fj = self.eval(j, n - i - 1);
                    inner = ring.add(&inner, &ring.mul(&fj, &akj));
                }
                value = ring.add(&value, &ring.mul(&weight, &inner));
                weight = ring.mul(&weight, &a1k);
            }
            value
        };
        self.memo.insert((k, n), value.clone());
        value
    }
}

/// `f_k^(n)` by the recursion on smaller `(j, m)`.
pub fn coeff_recursive<R: Ring>(
    f: &TruncatedSeries<R>,
    k: usize,
    n: u32,
) -> Result<R::Elem, IterationError> {
    RecursiveEvaluator::new(f).coeff(k, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{parse_rational, PolynomialRing, Rationals};

    fn series(coeffs: &[&str], order: usize) -> TruncatedSeries<Rationals> {
        let c = coeffs.iter().map(|c| parse_rational(c).unwrap()).collect();
        TruncatedSeries::with_order(Rationals, c, order).unwrap()
    }

    #[test]
    fn examples() {
        let f = series(&["2", "1"], 4);
        assert_eq!(Rationals.format(&coeff_recursive(&f, 2, 2).unwrap()), "6");
        assert_eq!(Rationals.format(&coeff_recursive(&f, 3, 2).unwrap()), "4");
        let id = series(&["1"], 6);
        for k in 2..=6 {
            for n in 1..5 {
                assert_eq!(Rationals.format(&coeff_recursive(&id, k, n).unwrap()), "0");
            }
        }
    }

    #[test]
    fn second_coefficient_closed_shape() {
        let r = PolynomialRing::new(2).unwrap();
        let f =
            TruncatedSeries::new(r, vec![r.variable(1).unwrap(), r.variable(2).unwrap()]).unwrap();
        let v = coeff_recursive(&f, 2, 3).unwrap();
        assert_eq!(v.to_string(), "a1^4*a2 + a1^3*a2 + a1^2*a2");
    }

    #[test]
    fn errors() {
        let f = series(&["2", "1"], 3);
        assert_eq!(
            coeff_recursive(&f, 4, 2),
            Err(IterationError::InsufficientTruncation { k: 4, order: 3 })
        );
        assert_eq!(
            coeff_recursive(&f, 2, 0),
            Err(IterationError::ZeroIterations)
        );
        assert_eq!(coeff_recursive(&f, 0, 1), Err(IterationError::ZeroIndex));
    }

    #[test]
    fn agrees_with_oracle_on_a_dense_series() {
        let f = series(&["-2", "1/3", "5", "-1", "2/7", "1"], 6);
        let iterates = f.iterates(6).unwrap();
        let mut ev = RecursiveEvaluator::new(&f);
        for (idx, it) in iterates.iter().enumerate() {
            for k in 1..=6 {
                assert_eq!(&ev.coeff(k, idx as u32 + 1).unwrap(), it.coeff(k), "k={k}");
            }
        }
    }
}
