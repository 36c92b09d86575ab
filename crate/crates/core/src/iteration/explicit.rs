//! Hand-expanded formulas for `f_1^(n)` through `f_5^(n)`.
//!
//! These are written out term by term and share no code with the closed
//! form, so the two can check each other. `S(e_0, e_1, ...)` below denotes
//! the nested sum
//!
//! ```text
//! sum_{i_0=0}^{n-d} a1^(e_0 i_0) sum_{i_1=0}^{n-d-i_0} a1^(e_1 i_1) ...
//! ```
//!
//! of depth `d = len(e)`.

use crate::coefficients::Ring;
use crate::series::TruncatedSeries;

use super::{check_indices, IterationError};

struct Expander<'a, R: Ring> {
    ring: &'a R,
    a1: &'a R::Elem,
    n: u32,
}

impl<R: Ring> Expander<'_, R> {
    /// `S(exps)` by literal loops.
    fn s(&self, exps: &[u64]) -> R::Elem {
        let depth = exps.len() as i64;
        self.loops(i64::from(self.n) - depth, exps)
    }

    fn loops(&self, bound: i64, exps: &[u64]) -> R::Elem {
        let ring = self.ring;
        let Some((&e, rest)) = exps.split_first() else {
            return ring.one();
        };
        let mut acc = ring.zero();
        let mut i = 0;
        while i <= bound {
            let w = ring.pow(self.a1, e * i as u64);
            acc = ring.add(&acc, &ring.mul(&w, &self.loops(bound - i, rest)));
            i += 1;
        }
        acc
    }

    /// `a1^(n + offset) * x`; the power is only formed when `x` is nonzero,
    /// since negative offsets only ever multiply empty sums.
    fn a1_pow_n(&self, offset: i64, x: R::Elem) -> R::Elem {
        if self.ring.is_zero(&x) {
            return x;
        }
        let e = i64::from(self.n) + offset;
        assert!(e >= 0, "negative power of a1 on a nonempty sum");
        self.ring.mul(&self.ring.pow(self.a1, e as u64), &x)
    }

    fn a1_pow(&self, e: u64) -> R::Elem {
        self.ring.pow(self.a1, e)
    }

    fn int(&self, c: u64) -> R::Elem {
        self.ring.from_u64(c)
    }

    fn prod(&self, factors: &[&R::Elem]) -> R::Elem {
        factors
            .iter()
            .fold(self.ring.one(), |acc, x| self.ring.mul(&acc, x))
    }

    fn add(&self, terms: &[R::Elem]) -> R::Elem {
        self.ring.sum(terms.iter())
    }
}

/// `f_k^(n)` for `1 <= k <= 5` from the expanded formulas.
pub fn coeff_explicit_small_k<R: Ring>(
    f: &TruncatedSeries<R>,
    k: usize,
    n: u32,
) -> Result<R::Elem, IterationError> {
    if k > 5 {
        return Err(IterationError::UseClosed);
    }
    check_indices(f, k, n)?;
    let ring = f.ring();
    let x = Expander {
        ring,
        a1: f.a1(),
        n,
    };
    let a = |j: usize| f.coeff(j);
    let value = match k {
        1 => x.a1_pow(u64::from(n)),
        // a1^(n-1) a2 S(1)
        2 => x.a1_pow_n(-1, ring.mul(a(2), &x.s(&[1]))),
        // a1^(n-1) a3 S(2) + 2 a1^(n-1) a2^2 S(2,1)
        3 => x.add(&[
            x.a1_pow_n(-1, ring.mul(a(3), &x.s(&[2]))),
            x.a1_pow_n(-1, x.prod(&[&x.int(2), a(2), a(2), &x.s(&[2, 1])])),
        ]),
        4 => f4(&x, a),
        5 => f5(&x, a),
        _ => unreachable!("k checked above"),
    };
    Ok(value)
}

// a1^(n-1) a4 S(3)
//   + a1^(n-1) a2 a3 [3 a1 S(3,2) + 2 S(3,1)]
//   + a2^3 a1^(n-2) [S(3,1) + 6 a1^2 S(3,2,1)]
fn f4<'a, R: Ring>(x: &Expander<'_, R>, a: impl Fn(usize) -> &'a R::Elem) -> R::Elem
where
    R::Elem: 'a,
{
    let r = x.ring;
    let t1 = x.a1_pow_n(-1, r.mul(a(4), &x.s(&[3])));
    let bracket2 = x.add(&[
        x.prod(&[&x.int(3), x.a1, &x.s(&[3, 2])]),
        x.prod(&[&x.int(2), &x.s(&[3, 1])]),
    ]);
    let t2 = x.a1_pow_n(-1, x.prod(&[a(2), a(3), &bracket2]));
    let bracket3 = x.add(&[
        x.s(&[3, 1]),
        x.prod(&[&x.int(6), &x.a1_pow(2), &x.s(&[3, 2, 1])]),
    ]);
    let t3 = x.a1_pow_n(-2, x.prod(&[a(2), a(2), a(2), &bracket3]));
    x.add(&[t1, t2, t3])
}

// a1^(n-1) a5 S(4)
//   + a1^(n-1) a2 a4 [2 S(4,1) + 4 a1^2 S(4,3)]
//   + a1^(n-2) a3 { 3 a1^2 a3 S(4,2)
//                   + a2^2 [ 2 S(4,1)
//                            + 4 a1^3 (3 a1 S(4,3,2) + 2 S(4,3,1))
//                            + 6 a1^2 S(4,2,1)
//                            + 3 a1 S(4,2) ] }
//   + a1^(n-2) a2^4 [ 4 a1^2 S(4,3,1) + 6 a1 S(4,2,1) + 24 a1^4 S(4,3,2,1) ]
fn f5<'a, R: Ring>(x: &Expander<'_, R>, a: impl Fn(usize) -> &'a R::Elem) -> R::Elem
where
    R::Elem: 'a,
{
    let r = x.ring;
    let t1 = x.a1_pow_n(-1, r.mul(a(5), &x.s(&[4])));

    let bracket2 = x.add(&[
        x.prod(&[&x.int(2), &x.s(&[4, 1])]),
        x.prod(&[&x.int(4), &x.a1_pow(2), &x.s(&[4, 3])]),
    ]);
    let t2 = x.a1_pow_n(-1, x.prod(&[a(2), a(4), &bracket2]));

    let inner_a2sq = x.add(&[
        x.prod(&[&x.int(2), &x.s(&[4, 1])]),
        x.prod(&[
            &x.int(4),
            &x.a1_pow(3),
            &x.add(&[
                x.prod(&[&x.int(3), x.a1, &x.s(&[4, 3, 2])]),
                x.prod(&[&x.int(2), &x.s(&[4, 3, 1])]),
            ]),
        ]),
        x.prod(&[&x.int(6), &x.a1_pow(2), &x.s(&[4, 2, 1])]),
        x.prod(&[&x.int(3), x.a1, &x.s(&[4, 2])]),
    ]);
    let brace = x.add(&[
        x.prod(&[&x.int(3), &x.a1_pow(2), a(3), &x.s(&[4, 2])]),
        x.prod(&[a(2), a(2), &inner_a2sq]),
    ]);
    let t3 = x.a1_pow_n(-2, r.mul(a(3), &brace));

    let bracket4 = x.add(&[
        x.prod(&[&x.int(4), &x.a1_pow(2), &x.s(&[4, 3, 1])]),
        x.prod(&[&x.int(6), x.a1, &x.s(&[4, 2, 1])]),
        x.prod(&[&x.int(24), &x.a1_pow(4), &x.s(&[4, 3, 2, 1])]),
    ]);
    let t4 = x.a1_pow_n(-2, x.prod(&[a(2), a(2), a(2), a(2), &bracket4]));

    x.add(&[t1, t2, t3, t4])
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
        let f = series(&["1", "1", "1", "1"], 4);
        assert_eq!(
            Rationals.format(&coeff_explicit_small_k(&f, 4, 2).unwrap()),
            "8"
        );
        let f = series(&["1", "1"], 5);
        assert_eq!(
            Rationals.format(&coeff_explicit_small_k(&f, 5, 3).unwrap()),
            "10"
        );
        let f = series(&["3"], 6);
        assert_eq!(
            Rationals.format(&coeff_explicit_small_k(&f, 1, 4).unwrap()),
            "81"
        );
        assert_eq!(
            coeff_explicit_small_k(&f, 6, 2),
            Err(IterationError::UseClosed)
        );
    }

    #[test]
    fn first_iterate_is_the_series() {
        let f = series(&["-2", "3", "1/2", "7", "-5"], 5);
        for k in 1..=5 {
            assert_eq!(&coeff_explicit_small_k(&f, k, 1).unwrap(), f.coeff(k));
        }
    }

    #[test]
    fn symbolic_agreement_with_oracle() {
        let r = PolynomialRing::new(5).unwrap();
        let f = TruncatedSeries::new(r, (1..=5).map(|j| r.variable(j).unwrap()).collect()).unwrap();
        let iterates = f.iterates(4).unwrap();
        for (idx, it) in iterates.iter().enumerate() {
            for k in 1..=5 {
                assert_eq!(
                    &coeff_explicit_small_k(&f, k, idx as u32 + 1).unwrap(),
                    it.coeff(k),
                    "k={k} n={}",
                    idx + 1
                );
            }
        }
    }
}
