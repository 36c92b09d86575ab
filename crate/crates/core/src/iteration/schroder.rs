use crate::coefficients::Ring;
use crate::multinomial::PowerCoefficientTable;
use crate::series::TruncatedSeries;

use super::{binomial, check_indices, enumerate_subsets, IterationError};

/// `f_k^(n)` for `a_1 = 1`:
///
/// ```text
/// f_k^(n) = a_k C(n,1) + sum_{alpha=2}^{k-1} C(n,alpha) sum a_k^[j_1] a_{j_1}^[j_2] ... a_{j_{alpha-1}}
/// ```
///
/// with the inner sum over decreasing chains in `[2, k-1]`.
pub fn coeff_schroder<R: Ring>(
    f: &TruncatedSeries<R>,
    k: usize,
    n: u32,
) -> Result<R::Elem, IterationError> {
    check_indices(f, k, n)?;
    let ring = f.ring();
    if !ring.is_one(f.a1()) {
        return Err(IterationError::SchroderRequiresUnitA1);
    }
    let choose = |alpha: usize| ring.from_biguint(&binomial(u64::from(n), alpha as u64));
    match k {
        1 => Ok(ring.one()),
        _ => {
            let mut acc = ring.mul(f.coeff(k), &choose(1));
            if k < 3 {
                return Ok(acc);
            }
            let table = PowerCoefficientTable::new(f);
            for alpha in 2..k {
                let c = choose(alpha);
                if ring.is_zero(&c) {
                    continue;
                }
                let mut level = ring.zero();
                for subset in enumerate_subsets(k, alpha)? {
                    let chain = subset.chain();
                    let mut term = f.coeff(*chain.last().expect("alpha >= 2")).clone();
                    for w in chain.windows(2) {
                        term = ring.mul(&term, table.get(w[0], w[1])?);
                    }
                    level = ring.add(&level, &term);
                }
                acc = ring.add(&acc, &ring.mul(&c, &level));
            }
            Ok(acc)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{parse_rational, PolynomialRing, Rationals};

    fn unit_generic(k: usize) -> TruncatedSeries<PolynomialRing> {
        let r = PolynomialRing::new(k).unwrap();
        let mut c = vec![r.one()];
        c.extend((2..=k).map(|j| r.variable(j).unwrap()));
        TruncatedSeries::new(r, c).unwrap()
    }

    #[test]
    fn k4_matches_binomial_form() {
        let f = unit_generic(4);
        let r = *f.ring();
        for n in 1..=6u32 {
            let b = |a: u64| binomial(u64::from(n), a).to_string();
            let expect = r
                .parse(&format!(
                    "{}*a4 + {}*5*a2*a3 + {}*a2^3 + {}*6*a2^3",
                    b(1),
                    b(2),
                    b(2),
                    b(3)
                ))
                .unwrap();
            assert_eq!(coeff_schroder(&f, 4, n).unwrap(), expect, "n={n}");
        }
    }

    #[test]
    fn k3_at_n2() {
        let f = unit_generic(3);
        assert_eq!(
            coeff_schroder(&f, 3, 2).unwrap().to_string(),
            "2*a2^2 + 2*a3"
        );
    }

    #[test]
    fn numeric_and_errors() {
        let c = ["1", "1"]
            .iter()
            .map(|s| parse_rational(s).unwrap())
            .collect();
        let f = TruncatedSeries::with_order(Rationals, c, 5).unwrap();
        assert_eq!(Rationals.format(&coeff_schroder(&f, 5, 3).unwrap()), "10");
        let c = ["2", "1"]
            .iter()
            .map(|s| parse_rational(s).unwrap())
            .collect();
        let g = TruncatedSeries::with_order(Rationals, c, 5).unwrap();
        assert_eq!(
            coeff_schroder(&g, 3, 2),
            Err(IterationError::SchroderRequiresUnitA1)
        );
        assert_eq!(
            IterationError::SchroderRequiresUnitA1.to_string(),
            "Schröder requires a_1 = 1"
        );
    }
}
