//! Exact coefficients of the n-fold composition of a formal power series.
//!
//! Given `f(x) = a_1 x + a_2 x^2 + ...`, the crate computes the coefficients
//! `f_k^(n)` of `f^(n) = f ∘ f ∘ ... ∘ f` by brute-force composition
//! ([`series`]), by a recursion on `(k, n)`, by a non-recursive closed form
//! over decreasing index chains, by expanded formulas for `k <= 5`, and by the
//! binomial form valid when `a_1 = 1` ([`iteration`]). The [`verify`] module
//! cross-checks them over rationals, prime fields and symbolic coefficients.

pub mod cli;
pub mod coefficients;
pub mod iteration;
pub mod multinomial;
pub mod series;
pub mod verify;

pub use coefficients::{DomainDescriptor, PolynomialRing, PrimeField, Rationals, Ring};
pub use series::{AnySeries, SeriesJson, TruncatedSeries};
