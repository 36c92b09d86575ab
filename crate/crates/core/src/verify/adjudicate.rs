//! Deciding between conflicting transcriptions of the `a_1 = 1` formulas.
//!
//! Two printed versions of the binomial form of `f_5^(n)` differ in the
//! `C(n,2)` term (`5 a2^2 a3` in one, `5 a2^2` in the other). Both are
//! evaluated against the symbolic oracle with `a_1 = 1` and generic
//! `a_2..a_5`; the oracle decides. The oracle values are also expanded in
//! the binomial basis `C(n, j)` so the correct form can be read off directly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coefficients::{DomainDescriptor, Monomial, Polynomial, PolynomialRing, Ring};
use crate::iteration::binomial;
use crate::series::TruncatedSeries;

use super::{Cell, CellStatus, Discrepancy, DiscrepancyReport};

const N_MAX: usize = 6;
const ORDER: usize = 5;

/// The outcome of one adjudication question.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub question: String,
    pub candidates: Vec<String>,
    /// The candidates that match the oracle for every tested `n`.
    pub agreeing: Vec<String>,
    /// Exactly one candidate agrees.
    pub conclusive: bool,
    /// The oracle coefficient written as `sum_j C(n,j) * c_j`.
    pub oracle_form: String,
}

struct Candidate {
    label: &'static str,
    k: usize,
    terms: &'static [(u64, &'static str)],
}

const F4: Candidate = Candidate {
    label: "f4",
    k: 4,
    terms: &[(1, "a4"), (2, "5*a2*a3 + a2^3"), (3, "6*a2^3")],
};

const F5_WITH_A3: Candidate = Candidate {
    label: "f5 with C(n,2) term 5*a2^2*a3 + 6*a2*a4 + 3*a3^2",
    k: 5,
    terms: &[
        (1, "a5"),
        (2, "5*a2^2*a3 + 6*a2*a4 + 3*a3^2"),
        (3, "10*a2^4 + 26*a2^2*a3"),
        (4, "24*a2^4"),
    ],
};

const F5_WITHOUT_A3: Candidate = Candidate {
    label: "f5 with C(n,2) term 5*a2^2 + 6*a2*a4 + 3*a3^2",
    k: 5,
    terms: &[
        (1, "a5"),
        (2, "5*a2^2 + 6*a2*a4 + 3*a3^2"),
        (3, "10*a2^4 + 26*a2^2*a3"),
        (4, "24*a2^4"),
    ],
};

impl Candidate {
    fn value(&self, ring: &PolynomialRing, n: u32) -> Polynomial {
        self.terms.iter().fold(ring.zero(), |acc, (alpha, poly)| {
            let c = ring.from_biguint(&binomial(u64::from(n), *alpha));
            let p = ring.parse(poly).expect("candidate polynomials parse");
            ring.add(&acc, &ring.mul(&c, &p))
        })
    }
}

/// Newton coefficients `c_1..c_N` with `v(n) = sum_j C(n,j) c_j` for
/// `values = [v(1), ..., v(N)]` and `v(0) = 0`.
pub fn binomial_basis<R: Ring>(ring: &R, values: &[R::Elem]) -> Vec<R::Elem> {
    let mut row: Vec<R::Elem> = std::iter::once(ring.zero())
        .chain(values.iter().cloned())
        .collect();
    let mut out = Vec::new();
    while row.len() > 1 {
        row = row.windows(2).map(|w| ring.sub(&w[1], &w[0])).collect();
        out.push(row[0].clone());
    }
    out
}

fn oracle_form(ring: &PolynomialRing, basis: &[Polynomial]) -> String {
    let parts: Vec<String> = basis
        .iter()
        .enumerate()
        .filter(|(_, c)| !ring.is_zero(c))
        .map(|(j, c)| format!("C(n,{})*({})", j + 1, ring.format(c)))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Symbolic adjudication for `a_1 = 1`, `n <= 6`.
///
/// `mismatches` counts the questions that are not conclusive; the refuted
/// candidates appear in `discrepancies`.
pub fn adjudicate_typo_cases() -> DiscrepancyReport {
    let ring = PolynomialRing::new(ORDER).expect("positive");
    let mut coeffs = vec![ring.one()];
    coeffs.extend((2..=ORDER).map(|j| ring.variable(j).expect("in range")));
    let f = TruncatedSeries::new(ring, coeffs).expect("valid series");
    let iterates = f.iterates(N_MAX as u32).expect("n >= 1");
    let domain = DomainDescriptor::Symbolic(ORDER);

    let mut cells = Vec::new();
    let mut discrepancies = Vec::new();
    let mut agrees = BTreeMap::new();
    for cand in [&F4, &F5_WITH_A3, &F5_WITHOUT_A3] {
        let mut all = true;
        for n in 1..=N_MAX {
            let oracle = iterates[n - 1].coeff(cand.k);
            let value = cand.value(&ring, n as u32);
            let ok = &value == oracle;
            all &= ok;
            let (o, v) = (ring.format(oracle), ring.format(&value));
            if !ok {
                discrepancies.push(Discrepancy {
                    k: cand.k,
                    n,
                    domain,
                    series: 0,
                    methods: ["oracle".into(), cand.label.into()],
                    values: [o.clone(), v.clone()],
                    difference: ring.format(&ring.sub(&value, oracle)),
                });
            }
            cells.push(Cell {
                k: cand.k,
                n,
                domain,
                series: 0,
                methods: vec!["oracle".into(), cand.label.into()],
                status: if ok {
                    CellStatus::Pass
                } else {
                    CellStatus::Fail
                },
                values: BTreeMap::from([("oracle".to_string(), o), (cand.label.to_string(), v)]),
            });
        }
        agrees.insert(cand.label, all);
    }

    let basis = |k: usize| {
        let values: Vec<Polynomial> = iterates.iter().map(|s| s.coeff(k).clone()).collect();
        binomial_basis(&ring, &values)
    };
    let (b4, b5) = (basis(4), basis(5));
    let verdict = |question: &str, cands: &[&Candidate], form: &str| {
        let agreeing: Vec<String> = cands
            .iter()
            .filter(|c| agrees[c.label])
            .map(|c| c.label.to_string())
            .collect();
        Verdict {
            question: question.into(),
            candidates: cands.iter().map(|c| c.label.to_string()).collect(),
            conclusive: agreeing.len() == 1,
            agreeing,
            oracle_form: form.into(),
        }
    };

    let mut verdicts = vec![
        verdict("binomial form of f4", &[&F4], &oracle_form(&ring, &b4)),
        verdict(
            "C(n,2) term of f5",
            &[&F5_WITH_A3, &F5_WITHOUT_A3],
            &oracle_form(&ring, &b5),
        ),
    ];
    // read the a2^2*a3 coefficient at C(n,3) straight from the oracle
    let a2sq_a3 = Monomial::new(vec![0, 2, 1]);
    let fitted = ring.format(&Polynomial::constant(b5[2].coefficient(&a2sq_a3)));
    let label = "26*a2^2*a3";
    verdicts.push(Verdict {
        question: "coefficient of a2^2*a3 at C(n,3) in f5".into(),
        candidates: vec![label.into()],
        agreeing: if fitted == "26" {
            vec![label.into()]
        } else {
            Vec::new()
        },
        conclusive: fitted == "26",
        oracle_form: format!("{fitted}*a2^2*a3"),
    });

    let mismatches = verdicts.iter().filter(|v| !v.conclusive).count();
    DiscrepancyReport {
        spec: serde_json::json!({
            "adjudication": "typo-adjudication",
            "a1": "one",
            "n": {"min": 1, "max": N_MAX},
        }),
        series: vec![f.to_json()],
        cells,
        mismatches,
        discrepancies,
        verdicts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::Rationals;
    use num_rational::BigRational;

    #[test]
    fn basis_of_known_sequences() {
        let q = |x: i64| BigRational::from_integer(x.into());
        // n^2 = C(n,1) + 2 C(n,2)
        let squares: Vec<_> = (1..=5).map(|n| q(n * n)).collect();
        assert_eq!(
            binomial_basis(&Rationals, &squares),
            vec![q(1), q(2), q(0), q(0), q(0)]
        );
    }

    #[test]
    fn the_oracle_decides() {
        let r = adjudicate_typo_cases();
        assert_eq!(r.mismatches, 0, "{:#?}", r.verdicts);
        let v = &r.verdicts[1];
        assert_eq!(v.agreeing.len(), 1);
        assert!(r.verdicts.iter().all(|v| v.conclusive));
    }
}
