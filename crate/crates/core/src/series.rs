//! Truncated formal power series with zero constant term.
//!
//! A [`TruncatedSeries`] of order `K` stores `a_1..a_K`; the constant term is
//! zero by construction. Multiplication, powers and composition are computed
//! modulo `x^(K+1)` and never change the order. [`TruncatedSeries::iterate`]
//! is the brute-force n-fold composition that every formula in
//! [`crate::iteration`] is checked against.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coefficients::{
    CoeffError, DomainDescriptor, PolynomialRing, PrimeField, Rationals, Ring,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("truncation order must be at least 1")]
    ZeroOrder,
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("domain mismatch: {0} vs {1}")]
    DomainMismatch(DomainDescriptor, DomainDescriptor),
    #[error("constant term unsupported: power 0 of a series is the constant 1")]
    ZeroPower,
    #[error("iteration count must be at least 1")]
    ZeroIterations,
    #[error("{got} coefficients given for order {order}")]
    TooManyCoefficients { got: usize, order: usize },
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("invalid series JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<R: Ring> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

/// `f^(n)` to the order of `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationResult<R: Ring> {
    pub n: u32,
    pub series: TruncatedSeries<R>,
}

impl<R: Ring> TruncatedSeries<R> {
    /// `coeffs[0]` is `a_1`; the order is `coeffs.len()`.
    pub fn new(ring: R, coeffs: Vec<R::Elem>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::ZeroOrder);
        }
        for c in &coeffs {
            ring.ensure(c)?;
        }
        Ok(TruncatedSeries { ring, coeffs })
    }

    /// Like [`new`](Self::new) but pads with zeros up to `order`.
    pub fn with_order(
        ring: R,
        mut coeffs: Vec<R::Elem>,
        order: usize,
    ) -> Result<Self, SeriesError> {
        if coeffs.len() > order {
            return Err(SeriesError::TooManyCoefficients {
                got: coeffs.len(),
                order,
            });
        }
        coeffs.resize(order, ring.zero());
        Self::new(ring, coeffs)
    }

    pub fn zero(ring: R, order: usize) -> Result<Self, SeriesError> {
        Self::with_order(ring, Vec::new(), order)
    }

    /// The identity series `x`.
    pub fn identity(ring: R, order: usize) -> Result<Self, SeriesError> {
        let one = ring.one();
        Self::with_order(ring, vec![one], order)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, 1-based. Panics unless `1 <= k <= order`.
    pub fn coeff(&self, k: usize) -> &R::Elem {
        assert!(
            k >= 1 && k <= self.order(),
            "coefficient index {k} outside 1..={}",
            self.order()
        );
        &self.coeffs[k - 1]
    }

    /// Coefficient of `x^k`, or `None` past the truncation order.
    pub fn get(&self, k: usize) -> Option<&R::Elem> {
        k.checked_sub(1).and_then(|i| self.coeffs.get(i))
    }

    pub fn a1(&self) -> &R::Elem {
        &self.coeffs[0]
    }

    /// Drops every coefficient above `order`.
    pub fn truncate(&self, order: usize) -> Result<Self, SeriesError> {
        if order == 0 {
            return Err(SeriesError::ZeroOrder);
        }
        if order > self.order() {
            return Err(SeriesError::OrderMismatch(order, self.order()));
        }
        Ok(TruncatedSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs[..order].to_vec(),
        })
    }

    fn check_compatible(&self, other: &Self) -> Result<(), SeriesError> {
        if self.ring != other.ring {
            return Err(SeriesError::DomainMismatch(
                self.ring.descriptor(),
                other.ring.descriptor(),
            ));
        }
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(other)?;
        Ok(TruncatedSeries {
            ring: self.ring.clone(),
            coeffs: self.mul_unchecked(&other.coeffs),
        })
    }

    fn mul_unchecked(&self, g: &[R::Elem]) -> Vec<R::Elem> {
        let r = &self.ring;
        let k_max = self.order();
        let mut out = vec![r.zero(); k_max];
        // x^m coefficient = sum_{j=1}^{m-1} f_j g_{m-j}
        for j in 1..k_max {
            let fj = &self.coeffs[j - 1];
            if r.is_zero(fj) {
                continue;
            }
            for l in 1..=(k_max - j) {
                let gl = &g[l - 1];
                if r.is_zero(gl) {
                    continue;
                }
                out[j + l - 1] = r.add(&out[j + l - 1], &r.mul(fj, gl));
            }
        }
        out
    }

    /// `(f(x))^i` for `i >= 1`; its `x^k` coefficient is `a_k^[i]`.
    pub fn pow(&self, i: u32) -> Result<Self, SeriesError> {
        if i == 0 {
            return Err(SeriesError::ZeroPower);
        }
        let mut acc: Option<Vec<R::Elem>> = None;
        let mut base = self.coeffs.clone();
        let mut e = i;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => self.with_coeffs(a).mul_unchecked(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = self.with_coeffs(base.clone()).mul_unchecked(&base);
        }
        Ok(self.with_coeffs(acc.expect("i >= 1")))
    }

    fn with_coeffs(&self, coeffs: Vec<R::Elem>) -> Self {
        TruncatedSeries {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    /// `f(g(x))`, evaluated Horner-style as `g * (a_1 + g * (a_2 + ... + g * a_K))`.
    pub fn compose(&self, g: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(g)?;
        let r = &self.ring;
        let k_max = self.order();
        // dense with constant term at index 0
        let mut acc = vec![r.zero(); k_max + 1];
        acc[0] = self.coeffs[k_max - 1].clone();
        for i in (1..k_max).rev() {
            acc = mul_by_series(r, &acc, &g.coeffs);
            acc[0] = r.add(&acc[0], &self.coeffs[i - 1]);
        }
        let out = mul_by_series(r, &acc, &g.coeffs);
        Ok(self.with_coeffs(out[1..].to_vec()))
    }

    /// `f^(n) = f^(n-1) ∘ f`, the brute-force oracle.
    pub fn iterate(&self, n: u32) -> Result<IterationResult<R>, SeriesError> {
        let mut all = self.iterates(n)?;
        Ok(IterationResult {
            n,
            series: all.pop().expect("n >= 1"),
        })
    }

    /// `[f^(1), ..., f^(n_max)]`.
    pub fn iterates(&self, n_max: u32) -> Result<Vec<Self>, SeriesError> {
        if n_max == 0 {
            return Err(SeriesError::ZeroIterations);
        }
        let mut out = vec![self.clone()];
        for _ in 1..n_max {
            let next = out.last().expect("non-empty").compose(self)?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            domain: self.ring.descriptor(),
            order: Some(self.order()),
            coeffs: self.coeffs.iter().map(|c| self.ring.format(c)).collect(),
        }
    }

    /// Parses coefficient strings in this ring, padding to `order`.
    pub fn from_strings(
        ring: R,
        coeffs: &[String],
        order: Option<usize>,
    ) -> Result<Self, SeriesError> {
        let parsed = coeffs
            .iter()
            .map(|s| ring.parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        let order = order.unwrap_or(parsed.len());
        Self::with_order(ring, parsed, order)
    }
}

/// Dense `a(x) * g(x) mod x^(K+1)` where `a` has a constant term and `g` does not.
fn mul_by_series<R: Ring>(r: &R, a: &[R::Elem], g: &[R::Elem]) -> Vec<R::Elem> {
    let k_max = a.len() - 1;
    let mut out = vec![r.zero(); k_max + 1];
    for (i, ai) in a.iter().enumerate() {
        if r.is_zero(ai) {
            continue;
        }
        for l in 1..=(k_max - i) {
            let gl = &g[l - 1];
            if r.is_zero(gl) {
                continue;
            }
            out[i + l] = r.add(&out[i + l], &r.mul(ai, gl));
        }
    }
    out
}

/// Wire format: `{"domain": ..., "order": K, "coeffs": ["a1", "a2", ...]}`.
///
/// On input `domain` defaults to rational and `order` to the number of
/// coefficients; shorter coefficient lists are padded with zeros.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesJson {
    #[serde(default)]
    pub domain: DomainDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    pub coeffs: Vec<String>,
}

impl SeriesJson {
    pub fn parse(text: &str) -> Result<Self, SeriesError> {
        serde_json::from_str(text).map_err(|e| SeriesError::Json(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("series JSON serializes")
    }

    /// Overrides the truncation order.
    pub fn with_order(mut self, order: usize) -> Self {
        self.order = Some(order);
        self
    }
}

/// A series over a domain chosen at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum AnySeries {
    Rational(TruncatedSeries<Rationals>),
    Prime(TruncatedSeries<PrimeField>),
    Symbolic(TruncatedSeries<PolynomialRing>),
}

impl AnySeries {
    pub fn from_json(json: &SeriesJson) -> Result<Self, SeriesError> {
        let order = json.order;
        Ok(match json.domain {
            DomainDescriptor::Rational => AnySeries::Rational(TruncatedSeries::from_strings(
                Rationals,
                &json.coeffs,
                order,
            )?),
            DomainDescriptor::Prime(p) => AnySeries::Prime(TruncatedSeries::from_strings(
                PrimeField::new(p)?,
                &json.coeffs,
                order,
            )?),
            DomainDescriptor::Symbolic(n) => AnySeries::Symbolic(TruncatedSeries::from_strings(
                PolynomialRing::new(n)?,
                &json.coeffs,
                order,
            )?),
        })
    }

    pub fn to_json(&self) -> SeriesJson {
        match self {
            AnySeries::Rational(s) => s.to_json(),
            AnySeries::Prime(s) => s.to_json(),
            AnySeries::Symbolic(s) => s.to_json(),
        }
    }

    pub fn descriptor(&self) -> DomainDescriptor {
        match self {
            AnySeries::Rational(s) => s.ring().descriptor(),
            AnySeries::Prime(s) => s.ring().descriptor(),
            AnySeries::Symbolic(s) => s.ring().descriptor(),
        }
    }
}
