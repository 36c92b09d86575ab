mod common;

use num_bigint::BigInt;
use proptest::prelude::*;

use common::{naive_compose, q, Q};
use fps_iterate::coefficients::{Polynomial, PolynomialRing, PrimeField, Rationals, Ring};
use fps_iterate::iteration::{coeff_closed, coeff_recursive};
use fps_iterate::series::{SeriesJson, TruncatedSeries};

fn small_q() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=9).prop_map(|(p, d)| q(p, d))
}

fn coeffs(order: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec(small_q(), order)
}

fn triple(max_order: usize) -> impl Strategy<Value = (Vec<Q>, Vec<Q>, Vec<Q>)> {
    (1..=max_order).prop_flat_map(|k| (coeffs(k), coeffs(k), coeffs(k)))
}

fn series(c: &[Q]) -> TruncatedSeries<Rationals> {
    TruncatedSeries::new(Rationals, c.to_vec()).unwrap()
}

/// Polynomials in a1..a3 with small integer coefficients.
fn poly() -> impl Strategy<Value = Polynomial> {
    let ring = PolynomialRing::new(3).unwrap();
    prop::collection::vec((-3i64..=3, 0u32..3, 0u32..3, 0u32..2), 0..5).prop_map(move |terms| {
        terms.into_iter().fold(ring.zero(), |acc, (c, e1, e2, e3)| {
            let mut m = ring.from_integer(&BigInt::from(c));
            for (var, e) in [(1, e1), (2, e2), (3, e3)] {
                m = ring.mul(&m, &ring.pow(&ring.variable(var).unwrap(), u64::from(e)));
            }
            ring.add(&acc, &m)
        })
    })
}

fn ring_axioms<R: Ring>(r: &R, a: &R::Elem, b: &R::Elem, c: &R::Elem) {
    assert_eq!(r.add(a, b), r.add(b, a));
    assert_eq!(r.mul(a, b), r.mul(b, a));
    assert_eq!(r.add(&r.add(a, b), c), r.add(a, &r.add(b, c)));
    assert_eq!(r.mul(&r.mul(a, b), c), r.mul(a, &r.mul(b, c)));
    assert_eq!(r.mul(a, &r.add(b, c)), r.add(&r.mul(a, b), &r.mul(a, c)));
    assert_eq!(r.add(a, &r.zero()), *a);
    assert_eq!(r.mul(a, &r.one()), *a);
    assert!(r.is_zero(&r.add(a, &r.neg(a))));
    assert_eq!(r.parse(&r.format(a)).unwrap(), *a);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_ring_axioms(a in small_q(), b in small_q(), c in small_q()) {
        ring_axioms(&Rationals, &a, &b, &c);
        if a != q(0, 1) {
            prop_assert_eq!(Rationals.mul(&a, &Rationals.inv(&a).unwrap()), q(1, 1));
        }
    }

    #[test]
    fn prime_ring_axioms(a in 0u64..101, b in 0u64..101, c in 0u64..101) {
        let r = PrimeField::new(101).unwrap();
        ring_axioms(&r, &a, &b, &c);
        if a != 0 {
            prop_assert_eq!(r.mul(&a, &r.inv(&a).unwrap()), 1);
        }
    }

    #[test]
    fn polynomial_ring_axioms(a in poly(), b in poly(), c in poly()) {
        ring_axioms(&PolynomialRing::new(3).unwrap(), &a, &b, &c);
    }

    #[test]
    fn substitution_is_a_homomorphism(a in poly(), b in poly(), x in prop::collection::vec(small_q(), 3)) {
        let r = PolynomialRing::new(3).unwrap();
        let at = |p: &Polynomial| r.substitute(p, &x, &Rationals).unwrap();
        prop_assert_eq!(at(&r.add(&a, &b)), Rationals.add(&at(&a), &at(&b)));
        prop_assert_eq!(at(&r.mul(&a, &b)), Rationals.mul(&at(&a), &at(&b)));
    }

    #[test]
    fn compose_matches_naive_and_is_associative((f, g, h) in triple(8)) {
        let (sf, sg, sh) = (series(&f), series(&g), series(&h));
        let fg = sf.compose(&sg).unwrap();
        let naive = naive_compose(&f, &g);
        prop_assert_eq!(fg.coeffs(), naive.as_slice());
        prop_assert_eq!(fg.compose(&sh).unwrap(), sf.compose(&sg.compose(&sh).unwrap()).unwrap());
    }

    #[test]
    fn semigroup_law(f in (1usize..=6).prop_flat_map(coeffs), m in 1u32..=4, n in 1u32..=4) {
        let s = series(&f);
        let lhs = s.iterate(m + n).unwrap().series;
        let rhs = s.iterate(m).unwrap().series.compose(&s.iterate(n).unwrap().series).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pow_is_a_fold_of_mul(f in (1usize..=8).prop_flat_map(coeffs), i in 1u32..=6) {
        let s = series(&f);
        let mut folded = s.clone();
        for _ in 1..i {
            folded = folded.mul(&s).unwrap();
        }
        prop_assert_eq!(s.pow(i).unwrap(), folded);
    }

    #[test]
    fn truncation_consistency(
        (f, g) in (2usize..=8).prop_flat_map(|k| (coeffs(k), coeffs(k))),
        cut in 1usize..8,
        n in 1u32..=4,
    ) {
        let (sf, sg) = (series(&f), series(&g));
        let cut = cut.min(f.len());
        let (tf, tg) = (sf.truncate(cut).unwrap(), sg.truncate(cut).unwrap());
        prop_assert_eq!(sf.mul(&sg).unwrap().truncate(cut).unwrap(), tf.mul(&tg).unwrap());
        prop_assert_eq!(sf.pow(3).unwrap().truncate(cut).unwrap(), tf.pow(3).unwrap());
        prop_assert_eq!(sf.compose(&sg).unwrap().truncate(cut).unwrap(), tf.compose(&tg).unwrap());
        prop_assert_eq!(sf.iterate(n).unwrap().series.truncate(cut).unwrap(), tf.iterate(n).unwrap().series);
    }

    #[test]
    fn formulas_match_oracle_over_a_prime_field(
        c in prop::collection::vec(0u64..31, 6),
        n in 1u32..=5,
    ) {
        let field = PrimeField::new(31).unwrap();
        let f = TruncatedSeries::new(field, c).unwrap();
        let it = f.iterate(n).unwrap().series;
        for k in 1..=6 {
            prop_assert_eq!(&coeff_recursive(&f, k, n).unwrap(), it.coeff(k));
            prop_assert_eq!(&coeff_closed(&f, k, n).unwrap(), it.coeff(k));
        }
    }

    #[test]
    fn series_json_round_trip(f in (1usize..=6).prop_flat_map(coeffs)) {
        let s = series(&f);
        let text = s.to_json().to_json_string();
        let back = SeriesJson::parse(&text).unwrap();
        prop_assert_eq!(back.to_json_string(), text);
    }
}
