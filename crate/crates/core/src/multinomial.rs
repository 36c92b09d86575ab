//! Coefficients `a_k^[i]` of `(f(x))^i` by the explicit multinomial sum.
//!
//! This route never multiplies series: it enumerates the exponent vectors
//! `(r_1, ..., r_k)` with `sum r_j = i` and `sum j * r_j = k` and adds up
//! `i! / (r_1! ... r_k!) * a_1^r_1 ... a_k^r_k`.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::coefficients::Ring;
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultinomialError {
    #[error("insufficient truncation: need a_{k}, series has order {order}")]
    InsufficientTruncation { k: usize, order: usize },
    #[error("indices must be at least 1 (k = {k}, i = {i})")]
    ZeroIndex { k: usize, i: usize },
    #[error("support bound needs k >= i >= 2 (k = {k}, i = {i})")]
    SupportBound { k: usize, i: usize },
}

/// Exponents `r_1..r_k` with `sum r_j = i` and `sum j * r_j = k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompositionPartition(Vec<u32>);

impl CompositionPartition {
    /// `r_1..r_k`, index 0 holding `r_1`.
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Number of parts `i`.
    pub fn parts(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Weighted size `k`.
    pub fn weight(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .map(|(j, &r)| (j + 1) * r as usize)
            .sum()
    }

    /// `i! / (r_1! ... r_k!)`.
    pub fn multinomial_factor(&self) -> BigUint {
        let num = factorial(self.parts());
        let den = self
            .0
            .iter()
            .fold(BigUint::one(), |acc, &r| acc * factorial(r));
        num / den
    }
}

pub(crate) fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, m| acc * m)
}

/// All partitions of `k` into exactly `i` positive parts, in ascending
/// lexicographic order of `(r_1, ..., r_k)`.
pub fn enumerate_partitions(k: usize, i: usize) -> Vec<CompositionPartition> {
    let mut out = Vec::new();
    if k == 0 || i == 0 || i > k {
        return out;
    }
    let mut r = vec![0u32; k];
    descend(k, i, k, &mut r, &mut out);
    out.sort();
    out
}

// choose r_j for j = part, part-1, ..., 1 with `count` parts of total `weight` left
fn descend(
    part: usize,
    count: usize,
    weight: usize,
    r: &mut [u32],
    out: &mut Vec<CompositionPartition>,
) {
    if part == 1 {
        if count == weight {
            r[0] = count as u32;
            out.push(CompositionPartition(r.to_vec()));
            r[0] = 0;
        }
        return;
    }
    let max_here = (weight / part).min(count);
    for take in 0..=max_here {
        let count_left = count - take;
        let weight_left = weight - part * take;
        // each remaining part has size in [1, part - 1]
        if count_left > weight_left || weight_left > (part - 1) * count_left {
            continue;
        }
        r[part - 1] = take as u32;
        descend(part - 1, count_left, weight_left, r, out);
        r[part - 1] = 0;
    }
}

/// `a_k^[i]`, the coefficient of `x^k` in `(f(x))^i`.
pub fn multinomial_coeff<R: Ring>(
    f: &TruncatedSeries<R>,
    k: usize,
    i: usize,
) -> Result<R::Elem, MultinomialError> {
    if k == 0 || i == 0 {
        return Err(MultinomialError::ZeroIndex { k, i });
    }
    if k > f.order() {
        return Err(MultinomialError::InsufficientTruncation {
            k,
            order: f.order(),
        });
    }
    let ring = f.ring();
    let mut acc = ring.zero();
    for partition in enumerate_partitions(k, i) {
        let mut term = ring.from_biguint(&partition.multinomial_factor());
        for (j, &r) in partition.exponents().iter().enumerate() {
            if r > 0 {
                term = ring.mul(&term, &ring.pow(f.coeff(j + 1), u64::from(r)));
            }
        }
        acc = ring.add(&acc, &term);
    }
    Ok(acc)
}

/// `a_k^[i]` depends only on `a_1..a_{k-i+1}`; returns `k - i + 1`.
pub fn variable_support_bound(k: usize, i: usize) -> Result<usize, MultinomialError> {
    if i < 2 || k < i {
        return Err(MultinomialError::SupportBound { k, i });
    }
    Ok(k - i + 1)
}

/// Lazily filled table of `a_k^[i]` for one series.
///
/// Cells are computed at most once and never change afterwards, so the
/// table can be shared between threads.
#[derive(Debug)]
pub struct PowerCoefficientTable<'a, R: Ring> {
    series: &'a TruncatedSeries<R>,
    zero: R::Elem,
    cells: Vec<OnceLock<R::Elem>>,
}

impl<'a, R: Ring> PowerCoefficientTable<'a, R> {
    pub fn new(series: &'a TruncatedSeries<R>) -> Self {
        let order = series.order();
        PowerCoefficientTable {
            series,
            zero: series.ring().zero(),
            cells: (0..order * order).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn series(&self) -> &'a TruncatedSeries<R> {
        self.series
    }

    /// `a_k^[i]`; zero when `k < i`.
    pub fn get(&self, k: usize, i: usize) -> Result<&R::Elem, MultinomialError> {
        let order = self.series.order();
        if k == 0 || i == 0 {
            return Err(MultinomialError::ZeroIndex { k, i });
        }
        if k > order {
            return Err(MultinomialError::InsufficientTruncation { k, order });
        }
        if i > k {
            return Ok(&self.zero);
        }
        if i == 1 {
            return Ok(self.series.coeff(k));
        }
        let cell = &self.cells[(k - 1) * order + (i - 1)];
        if let Some(v) = cell.get() {
            return Ok(v);
        }
        let v = multinomial_coeff(self.series, k, i)?;
        Ok(cell.get_or_init(|| v))
    }

    /// Fills every cell up front.
    pub fn seal(&self) {
        let order = self.series.order();
        for k in 1..=order {
            for i in 1..=k {
                self.get(k, i).expect("indices in range");
            }
        }
    }
}
