//! Non-recursive form of `f_k^(n)`.
//!
//! For `k >= 3`,
//!
//! ```text
//! f_k^(n) = a_k C_{k,n} + sum_{alpha=2}^{k-1} A_{alpha,k}
//! ```
//!
//! where `A_{alpha,k}` sums one [`ClosedFormTerm`] per strictly decreasing
//! chain `k = j_0 > j_1 > ... > j_{alpha-1} >= 2`. Each term is a prefactor
//!
//! ```text
//! B = a1^(n-alpha) * a_{j_{alpha-1}} * a_{j_{alpha-2}}^[j_{alpha-1}] * ... * a_{j_0}^[j_1]
//! ```
//!
//! times an `alpha`-deep nested geometric sum over `i_0 + ... + i_{alpha-1} <= n - alpha`
//! with weights `a1^((j_m - 1) i_m)`.

use crate::coefficients::Ring;
use crate::multinomial::PowerCoefficientTable;
use crate::series::TruncatedSeries;

use super::{check_indices, geometric_factor, IterationError};

/// A chain `j_1 > j_2 > ... > j_{alpha-1}` inside `[2, k-1]`; `j_0 = k` is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DecreasingSubset {
    k: usize,
    parts: Vec<usize>,
}

impl DecreasingSubset {
    pub fn new(k: usize, parts: Vec<usize>) -> Result<Self, IterationError> {
        let alpha = parts.len() + 1;
        if k < 3 || alpha < 2 || alpha > k - 1 {
            return Err(IterationError::LevelOutOfRange {
                k,
                alpha,
                max: k.saturating_sub(1),
            });
        }
        let mut prev = k;
        for &j in &parts {
            if j >= prev || j < 2 {
                return Err(IterationError::IdentityViolated(format!(
                    "{parts:?} is not a decreasing chain in [2, {}]",
                    k - 1
                )));
            }
            prev = j;
        }
        Ok(DecreasingSubset { k, parts })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Depth `alpha = len + 1`.
    pub fn alpha(&self) -> usize {
        self.parts.len() + 1
    }

    /// `j_1, ..., j_{alpha-1}`.
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `j_0, j_1, ..., j_{alpha-1}` with `j_0 = k`.
    pub fn chain(&self) -> Vec<usize> {
        std::iter::once(self.k)
            .chain(self.parts.iter().copied())
            .collect()
    }

    /// Largest consecutive gap `j_{m-1} - j_m`.
    pub fn max_gap(&self) -> usize {
        self.chain()
            .windows(2)
            .map(|w| w[0] - w[1])
            .max()
            .unwrap_or(0)
    }
}

/// All `(alpha-1)`-element subsets of `{2, ..., k-1}` as decreasing chains,
/// in lexicographically descending order.
pub fn enumerate_subsets(k: usize, alpha: usize) -> Result<Vec<DecreasingSubset>, IterationError> {
    if k < 3 {
        return Err(IterationError::KTooSmall(k));
    }
    if alpha < 2 || alpha > k - 1 {
        return Err(IterationError::LevelOutOfRange {
            k,
            alpha,
            max: k - 1,
        });
    }
    let mut out = Vec::new();
    let mut parts = Vec::with_capacity(alpha - 1);
    pick_descending(k - 1, alpha - 1, &mut parts, &mut |p| {
        out.push(DecreasingSubset {
            k,
            parts: p.to_vec(),
        })
    });
    for s in &out {
        assert!(
            s.max_gap() <= k - alpha,
            "gap bound violated by {:?} (k = {k}, alpha = {alpha})",
            s.parts
        );
    }
    Ok(out)
}

fn pick_descending(
    top: usize,
    remaining: usize,
    parts: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if remaining == 0 {
        emit(parts);
        return;
    }
    // leave room for `remaining - 1` smaller members >= 2
    let lowest = remaining + 1;
    for j in (lowest..=top).rev() {
        parts.push(j);
        pick_descending(j - 1, remaining - 1, parts, emit);
        parts.pop();
    }
}

/// The nested sum `sum_{i_0} a1^((k-1) i_0) sum_{i_1} a1^((j_1-1) i_1) ...`
/// with `i_0 + ... + i_{alpha-1} <= n - alpha`; zero when `n < alpha`.
pub fn nested_geometric_sum<R: Ring>(
    f: &TruncatedSeries<R>,
    n: u32,
    subset: &DecreasingSubset,
) -> R::Elem {
    nested_sum_with(f.ring(), f.a1(), n, subset)
}

fn nested_sum_with<R: Ring>(ring: &R, a1: &R::Elem, n: u32, subset: &DecreasingSubset) -> R::Elem {
    let alpha = subset.alpha();
    let n = n as usize;
    if n < alpha {
        return ring.zero();
    }
    let budget = n - alpha;
    // tail[b] = value of the sums below the current depth with b left to spend
    let mut tail = vec![ring.one(); budget + 1];
    for &j in subset.chain().iter().rev() {
        let w = ring.pow(a1, (j - 1) as u64);
        let mut powers = Vec::with_capacity(budget + 1);
        let mut p = ring.one();
        for _ in 0..=budget {
            powers.push(p.clone());
            p = ring.mul(&p, &w);
        }
        let next: Vec<R::Elem> = (0..=budget)
            .map(|b| {
                let mut acc = ring.zero();
                for i in 0..=b {
                    acc = ring.add(&acc, &ring.mul(&powers[i], &tail[b - i]));
                }
                acc
            })
            .collect();
        tail = next;
    }
    tail.swap_remove(budget)
}

/// One summand `B * nested_sum` of `A_{alpha,k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormTerm<R: Ring> {
    pub subset: DecreasingSubset,
    pub prefactor: R::Elem,
    pub nested_sum: R::Elem,
}

impl<R: Ring> ClosedFormTerm<R> {
    pub fn value(&self, ring: &R) -> R::Elem {
        ring.mul(&self.prefactor, &self.nested_sum)
    }
}

fn prefactor<R: Ring>(
    table: &PowerCoefficientTable<'_, R>,
    n: u32,
    subset: &DecreasingSubset,
) -> Result<R::Elem, IterationError> {
    let f = table.series();
    let ring = f.ring();
    let alpha = subset.alpha();
    let chain = subset.chain();
    let last = *chain.last().expect("alpha >= 2");
    let mut b = ring.mul(
        &ring.pow(f.a1(), u64::from(n) - alpha as u64),
        f.coeff(last),
    );
    for w in chain.windows(2) {
        b = ring.mul(&b, table.get(w[0], w[1])?);
    }
    Ok(b)
}

/// The terms of `A_{alpha,k}`, one per subset, in subset enumeration order.
/// Empty when `n < alpha`.
pub fn closed_form_terms<R: Ring>(
    table: &PowerCoefficientTable<'_, R>,
    k: usize,
    n: u32,
    alpha: usize,
) -> Result<Vec<ClosedFormTerm<R>>, IterationError> {
    let f = table.series();
    check_indices(f, k, n)?;
    let subsets = enumerate_subsets(k, alpha)?;
    if (n as usize) < alpha {
        return Ok(Vec::new());
    }
    subsets
        .into_iter()
        .map(|subset| {
            Ok(ClosedFormTerm {
                prefactor: prefactor(table, n, &subset)?,
                nested_sum: nested_sum_with(f.ring(), f.a1(), n, &subset),
                subset,
            })
        })
        .collect()
}

/// `A_{alpha,k}`.
pub fn level_sum<R: Ring>(
    table: &PowerCoefficientTable<'_, R>,
    k: usize,
    n: u32,
    alpha: usize,
) -> Result<R::Elem, IterationError> {
    let ring = table.series().ring();
    let terms = closed_form_terms(table, k, n, alpha)?;
    Ok(terms
        .iter()
        .fold(ring.zero(), |acc, t| ring.add(&acc, &t.value(ring))))
}

/// `P_k^(n) = sum_{alpha=2}^{k-1} A_{alpha,k}`; zero for `k < 3`.
pub fn residual_closed<R: Ring>(
    table: &PowerCoefficientTable<'_, R>,
    k: usize,
    n: u32,
) -> Result<R::Elem, IterationError> {
    let f = table.series();
    check_indices(f, k, n)?;
    let ring = f.ring();
    let mut acc = ring.zero();
    for alpha in 2..k {
        acc = ring.add(&acc, &level_sum(table, k, n, alpha)?);
    }
    Ok(acc)
}

/// `f_k^(n)` from the closed form, reusing a power coefficient table.
pub fn coeff_closed_with<R: Ring>(
    table: &PowerCoefficientTable<'_, R>,
    k: usize,
    n: u32,
) -> Result<R::Elem, IterationError> {
    let f = table.series();
    check_indices(f, k, n)?;
    let ring = f.ring();
    let a1 = f.a1();
    match k {
        1 => Ok(ring.pow(a1, u64::from(n))),
        2 => {
            let mut sum = ring.zero();
            let mut p = ring.one();
            for _ in 0..n {
                sum = ring.add(&sum, &p);
                p = ring.mul(&p, a1);
            }
            Ok(ring.mul(&ring.mul(f.coeff(2), &ring.pow(a1, u64::from(n - 1))), &sum))
        }
        _ => {
            let lead = ring.mul(f.coeff(k), &geometric_factor(f, k, n));
            Ok(ring.add(&lead, &residual_closed(table, k, n)?))
        }
    }
}

/// `f_k^(n)` from the closed form.
pub fn coeff_closed<R: Ring>(
    f: &TruncatedSeries<R>,
    k: usize,
    n: u32,
) -> Result<R::Elem, IterationError> {
    coeff_closed_with(&PowerCoefficientTable::new(f), k, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{parse_rational, PolynomialRing, Rationals};

    fn series(coeffs: &[&str], order: usize) -> TruncatedSeries<Rationals> {
        let c = coeffs.iter().map(|c| parse_rational(c).unwrap()).collect();
        TruncatedSeries::with_order(Rationals, c, order).unwrap()
    }

    fn parts(v: &[DecreasingSubset]) -> Vec<Vec<usize>> {
        v.iter().map(|s| s.parts().to_vec()).collect()
    }

    // literal nested loops, independent of the table-driven evaluation
    fn nested_loops(
        r: &Rationals,
        a1: &num_rational::BigRational,
        n: usize,
        chain: &[usize],
    ) -> num_rational::BigRational {
        fn go(
            r: &Rationals,
            a1: &num_rational::BigRational,
            left: i64,
            chain: &[usize],
        ) -> num_rational::BigRational {
            if chain.is_empty() {
                return r.one();
            }
            let mut acc = r.zero();
            for i in 0..=left.max(-1) {
                let w = r.pow(a1, ((chain[0] - 1) * i as usize) as u64);
                acc = r.add(&acc, &r.mul(&w, &go(r, a1, left - i, &chain[1..])));
            }
            acc
        }
        go(r, a1, n as i64 - chain.len() as i64, chain)
    }

    #[test]
    fn subset_examples() {
        assert_eq!(
            parts(&enumerate_subsets(5, 3).unwrap()),
            vec![vec![4, 3], vec![4, 2], vec![3, 2]]
        );
        assert_eq!(
            parts(&enumerate_subsets(5, 4).unwrap()),
            vec![vec![4, 3, 2]]
        );
        assert_eq!(
            parts(&enumerate_subsets(4, 2).unwrap()),
            vec![vec![3], vec![2]]
        );
        assert!(matches!(
            enumerate_subsets(5, 5),
            Err(IterationError::LevelOutOfRange { .. })
        ));
        assert!(matches!(
            enumerate_subsets(5, 1),
            Err(IterationError::LevelOutOfRange { .. })
        ));
        assert_eq!(enumerate_subsets(2, 2), Err(IterationError::KTooSmall(2)));
    }

    #[test]
    fn nested_sum_examples() {
        let f = series(&["2", "1"], 3);
        let s = DecreasingSubset::new(3, vec![2]).unwrap();
        assert_eq!(
            nested_geometric_sum(&f, 2, &s),
            parse_rational("1").unwrap()
        );
        assert_eq!(
            nested_geometric_sum(&f, 1, &s),
            parse_rational("0").unwrap()
        );
    }

    #[test]
    fn nested_sum_matches_literal_loops() {
        let r = Rationals;
        for a1 in ["2", "-1", "1/3", "1"] {
            let f = series(&[a1], 7);
            for k in 3..=7 {
                for alpha in 2..k {
                    for s in enumerate_subsets(k, alpha).unwrap() {
                        for n in 1..=7u32 {
                            assert_eq!(
                                nested_geometric_sum(&f, n, &s),
                                nested_loops(&r, f.a1(), n as usize, &s.chain()),
                                "a1={a1} chain={:?} n={n}",
                                s.chain()
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn closed_examples() {
        let f = series(&["2", "1"], 4);
        assert_eq!(Rationals.format(&coeff_closed(&f, 3, 2).unwrap()), "4");
        let f = series(&["1", "1"], 5);
        assert_eq!(Rationals.format(&coeff_closed(&f, 5, 3).unwrap()), "10");
        assert_eq!(
            coeff_closed(&f, 6, 3),
            Err(IterationError::InsufficientTruncation { k: 6, order: 5 })
        );
    }

    #[test]
    fn terms_of_level_two_for_k4() {
        let r = PolynomialRing::new(4).unwrap();
        let f = TruncatedSeries::new(r, (1..=4).map(|j| r.variable(j).unwrap()).collect()).unwrap();
        let table = PowerCoefficientTable::new(&f);
        let terms = closed_form_terms(&table, 4, 3, 2).unwrap();
        assert_eq!(terms.len(), 2);
        // j1 = 3: a1^(n-2) a3 a4^[3] = a1 * a3 * 3 a1^2 a2
        assert_eq!(terms[0].prefactor.to_string(), "3*a1^3*a2*a3");
        // j1 = 2: a1 * a2 * (2 a1 a3 + a2^2)
        assert_eq!(terms[1].prefactor.to_string(), "2*a1^2*a2*a3 + a1*a2^3");
        assert!(closed_form_terms(&table, 4, 1, 2).unwrap().is_empty());
    }
}
