//! Cross-method equivalence sweeps.
//!
//! A [`SweepSpec`] names a grid of `(k, n)` cells, the coefficient domains,
//! the series generator and the methods to compare. [`run_sweep`] evaluates
//! every method on every cell and compares it with the brute-force oracle.
//! The resulting [`DiscrepancyReport`] is deterministic for a fixed spec.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coefficients::{
    CoeffError, DomainDescriptor, PolynomialRing, PrimeField, Rationals, Ring,
};
use crate::iteration::{
    coeff_closed_with, coeff_explicit_small_k, coeff_schroder, muckenhoupt_f2, RecursiveEvaluator,
};
use crate::multinomial::PowerCoefficientTable;
use crate::series::{AnySeries, SeriesError, SeriesJson, TruncatedSeries};

mod adjudicate;

pub use adjudicate::{adjudicate_typo_cases, binomial_basis, Verdict};

/// Exhaustive generators refuse to produce more series than this.
pub const EXHAUSTIVE_LIMIT: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Oracle,
    Recursive,
    Closed,
    ExplicitSmallK,
    Schroder,
    Muckenhoupt,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Oracle,
        Method::Recursive,
        Method::Closed,
        Method::ExplicitSmallK,
        Method::Schroder,
        Method::Muckenhoupt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Recursive => "recursive",
            Method::Closed => "closed",
            Method::ExplicitSmallK => "explicit_small_k",
            Method::Schroder => "schroder",
            Method::Muckenhoupt => "muckenhoupt",
        }
    }
}

/// How `a_1` is chosen by the symbolic generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum A1Mode {
    /// `a_1` is the indeterminate `a1`.
    Generic,
    /// `a_1 = 1`.
    One,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// `count` seeded random series per domain. Over the rationals `a_1` is
    /// drawn from `{1, -1, 2, 1/2, 3, -2}` and `a_j = p/q` with
    /// `p, q in [-9, 9]`, `q != 0`. Prime domains use the images of the same
    /// values and add roots of unity to the choices for `a_1`.
    RandomRational { seed: u64, count: usize },
    /// Every series with `a_1 in {1, -1, 2}` and `a_j in {-1, 0, 1}`.
    ExhaustiveSmall,
    /// One series over `Q[a1..aK]` with `a_j` the indeterminate `aj`.
    SymbolicGeneric { a1: A1Mode },
    /// Explicit series, each in its own domain.
    User { series: Vec<SeriesJson> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    pub min: usize,
    pub max: usize,
}

impl Bounds {
    pub fn new(min: usize, max: usize) -> Self {
        Bounds { min, max }
    }

    fn iter(self) -> std::ops::RangeInclusive<usize> {
        self.min..=self.max
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub k: Bounds,
    pub n: Bounds,
    /// Domains for the random and exhaustive generators.
    #[serde(default = "default_domains")]
    pub domains: Vec<DomainDescriptor>,
    pub methods: Vec<Method>,
    pub generator: Generator,
}

fn default_domains() -> Vec<DomainDescriptor> {
    vec![DomainDescriptor::Rational]
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self, VerifyError> {
        let spec: SweepSpec =
            serde_json::from_str(text).map_err(|e| VerifyError::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        let bad = |m: String| Err(VerifyError::InvalidSpec(m));
        if self.methods.len() < 2 {
            return bad("at least two methods are required".into());
        }
        if !self.methods.contains(&Method::Oracle) {
            return bad("the oracle must be among the methods".into());
        }
        if self.k.min == 0 || self.k.min > self.k.max {
            return bad(format!(
                "k range {}..={} is empty or starts at 0",
                self.k.min, self.k.max
            ));
        }
        if self.n.min == 0 || self.n.min > self.n.max || self.n.max > u32::MAX as usize {
            return bad(format!(
                "n range {}..={} is empty or starts at 0",
                self.n.min, self.n.max
            ));
        }
        match &self.generator {
            Generator::RandomRational { count, .. } => {
                if *count == 0 {
                    return bad("random generator needs count >= 1".into());
                }
                self.check_numeric_domains()?;
            }
            Generator::ExhaustiveSmall => {
                let total = exhaustive_count(self.k.max);
                if total.is_none_or(|t| t.saturating_mul(self.domains.len()) > EXHAUSTIVE_LIMIT) {
                    return bad(format!(
                        "exhaustive generator at k = {} exceeds {EXHAUSTIVE_LIMIT} series",
                        self.k.max
                    ));
                }
                self.check_numeric_domains()?;
            }
            Generator::SymbolicGeneric { .. } => {}
            Generator::User { series } => {
                if series.is_empty() {
                    return bad("user generator needs at least one series".into());
                }
                for (i, s) in series.iter().enumerate() {
                    let parsed = AnySeries::from_json(s)
                        .map_err(|e| VerifyError::InvalidSpec(format!("series {i}: {e}")))?;
                    let order = any_order(&parsed);
                    if order < self.k.max {
                        return bad(format!(
                            "series {i} has order {order}, below k = {}",
                            self.k.max
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_numeric_domains(&self) -> Result<(), VerifyError> {
        if self.domains.is_empty() {
            return Err(VerifyError::InvalidSpec("no domains given".into()));
        }
        for d in &self.domains {
            match d {
                DomainDescriptor::Symbolic(_) => {
                    return Err(VerifyError::InvalidSpec(
                        "symbolic domains need the symbolic_generic generator".into(),
                    ))
                }
                d => d
                    .validate()
                    .map_err(|e| VerifyError::InvalidSpec(e.to_string()))?,
            }
        }
        Ok(())
    }

    /// Named presets; `None` for an unknown name.
    pub fn preset(name: &str) -> Option<Self> {
        let sweep = |k: usize, n: usize, domains, methods: &[Method], generator| SweepSpec {
            k: Bounds::new(1, k),
            n: Bounds::new(1, n),
            domains,
            methods: methods.to_vec(),
            generator,
        };
        let rational = vec![DomainDescriptor::Rational];
        Some(match name {
            "acceptance" => sweep(
                8,
                6,
                rational,
                &Method::ALL,
                Generator::RandomRational {
                    seed: 42,
                    count: 100,
                },
            ),
            "symbolic" => sweep(
                6,
                5,
                rational,
                &[
                    Method::Oracle,
                    Method::Recursive,
                    Method::Closed,
                    Method::ExplicitSmallK,
                ],
                Generator::SymbolicGeneric {
                    a1: A1Mode::Generic,
                },
            ),
            "schroder" => sweep(
                7,
                7,
                rational,
                &[Method::Oracle, Method::Closed, Method::Schroder],
                Generator::SymbolicGeneric { a1: A1Mode::One },
            ),
            "prime" => sweep(
                8,
                6,
                vec![DomainDescriptor::Prime(97), DomainDescriptor::Prime(7)],
                &Method::ALL,
                Generator::RandomRational {
                    seed: 42,
                    count: 50,
                },
            ),
            _ => return None,
        })
    }
}

/// Names accepted by [`SweepSpec::preset`], plus the adjudication run.
pub const PRESETS: [&str; 5] = [
    "acceptance",
    "symbolic",
    "schroder",
    "prime",
    "typo-adjudication",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellStatus {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "n/a")]
    NotApplicable,
}

/// One `(series, k, n)` cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub k: usize,
    pub n: usize,
    pub domain: DomainDescriptor,
    /// Index into [`DiscrepancyReport::series`].
    pub series: usize,
    pub methods: Vec<String>,
    pub status: CellStatus,
    /// Canonical value per method, `"n/a"` where a method does not apply.
    pub values: BTreeMap<String, String>,
}

/// Two methods disagreeing on a cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub k: usize,
    pub n: usize,
    pub domain: DomainDescriptor,
    pub series: usize,
    pub methods: [String; 2],
    pub values: [String; 2],
    /// Second value minus the first, printed canonically.
    pub difference: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub spec: serde_json::Value,
    pub series: Vec<SeriesJson>,
    pub cells: Vec<Cell>,
    pub mismatches: usize,
    pub discrepancies: Vec<Discrepancy>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<Verdict>,
}

impl DiscrepancyReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Count of cells per status.
    pub fn status_counts(&self) -> BTreeMap<CellStatus, usize> {
        let mut out = BTreeMap::new();
        for c in &self.cells {
            *out.entry(c.status).or_insert(0) += 1;
        }
        out
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<DiscrepancyReport, VerifyError> {
    run_sweep_with_threads(spec, 0)
}

/// As [`run_sweep`] on a pool of `threads` workers (0 picks the default).
pub fn run_sweep_with_threads(
    spec: &SweepSpec,
    threads: usize,
) -> Result<DiscrepancyReport, VerifyError> {
    spec.validate()?;
    let inputs = generate(spec)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| VerifyError::ThreadPool(e.to_string()))?;
    let results: Vec<(Vec<Cell>, Vec<Discrepancy>)> = pool.install(|| {
        inputs
            .par_iter()
            .enumerate()
            .map(|(i, s)| match s {
                AnySeries::Rational(f) => sweep_series(spec, i, f),
                AnySeries::Prime(f) => sweep_series(spec, i, f),
                AnySeries::Symbolic(f) => sweep_series(spec, i, f),
            })
            .collect()
    });
    let mut cells = Vec::new();
    let mut discrepancies = Vec::new();
    for (c, d) in results {
        cells.extend(c);
        discrepancies.extend(d);
    }
    cells.sort_by_key(|c| (c.series, c.k, c.n));
    discrepancies
        .sort_by(|a, b| (a.series, a.k, a.n, &a.methods).cmp(&(b.series, b.k, b.n, &b.methods)));
    Ok(DiscrepancyReport {
        spec: serde_json::to_value(spec).expect("spec serializes"),
        series: inputs.iter().map(AnySeries::to_json).collect(),
        mismatches: discrepancies.len(),
        cells,
        discrepancies,
        verdicts: Vec::new(),
    })
}

fn any_order(s: &AnySeries) -> usize {
    match s {
        AnySeries::Rational(f) => f.order(),
        AnySeries::Prime(f) => f.order(),
        AnySeries::Symbolic(f) => f.order(),
    }
}

fn exhaustive_count(order: usize) -> Option<usize> {
    3usize.checked_pow(u32::try_from(order).ok()?)
}

/// The input series of a sweep, in report order.
pub fn generate(spec: &SweepSpec) -> Result<Vec<AnySeries>, VerifyError> {
    let order = spec.k.max;
    let mut out = Vec::new();
    match &spec.generator {
        Generator::RandomRational { seed, count } => {
            for (stream, d) in spec.domains.iter().enumerate() {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(stream as u64);
                for _ in 0..*count {
                    out.push(random_series(&mut rng, *d, order)?);
                }
            }
        }
        Generator::ExhaustiveSmall => {
            for d in &spec.domains {
                for coeffs in exhaustive_rows(order) {
                    out.push(numeric_series(*d, &coeffs, order)?);
                }
            }
        }
        Generator::SymbolicGeneric { a1 } => {
            let r = PolynomialRing::new(order)?;
            let mut coeffs = vec![match a1 {
                A1Mode::Generic => r.variable(1)?,
                A1Mode::One => r.one(),
            }];
            for j in 2..=order {
                coeffs.push(r.variable(j)?);
            }
            out.push(AnySeries::Symbolic(TruncatedSeries::new(r, coeffs)?));
        }
        Generator::User { series } => {
            for s in series {
                out.push(AnySeries::from_json(s)?);
            }
        }
    }
    Ok(out)
}

const A1_CHOICES: [(i64, i64); 6] = [(1, 1), (-1, 1), (2, 1), (1, 2), (3, 1), (-2, 1)];

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn draw_small_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let p = rng.gen_range(-9..=9);
    let q = loop {
        let q = rng.gen_range(-9..=9);
        if q != 0 {
            break q;
        }
    };
    ratio(p, q)
}

fn random_series(
    rng: &mut ChaCha8Rng,
    domain: DomainDescriptor,
    order: usize,
) -> Result<AnySeries, VerifyError> {
    match domain {
        DomainDescriptor::Rational => {
            let &(p, q) = A1_CHOICES.choose(rng).expect("non-empty");
            let mut coeffs = vec![ratio(p, q)];
            coeffs.extend((2..=order).map(|_| draw_small_rational(rng)));
            Ok(AnySeries::Rational(TruncatedSeries::new(
                Rationals, coeffs,
            )?))
        }
        DomainDescriptor::Prime(p) => {
            let field = PrimeField::new(p)?;
            let a1_choices = prime_a1_choices(&field);
            let mut coeffs = vec![*a1_choices.choose(rng).expect("non-empty")];
            for _ in 2..=order {
                // redraw values whose denominator vanishes mod p
                let c = loop {
                    if let Some(c) = field.from_rational(&draw_small_rational(rng)) {
                        break c;
                    }
                };
                coeffs.push(c);
            }
            Ok(AnySeries::Prime(TruncatedSeries::new(field, coeffs)?))
        }
        DomainDescriptor::Symbolic(_) => Err(VerifyError::InvalidSpec(
            "symbolic domains need the symbolic_generic generator".into(),
        )),
    }
}

/// Images of the rational choices plus `g^((p-1)/d)` for `d in 2..=12`
/// dividing `p - 1`, without zero or repeats.
fn prime_a1_choices(field: &PrimeField) -> Vec<u64> {
    let p = field.modulus();
    let mut out: Vec<u64> = Vec::new();
    let mut push = |x: u64| {
        if x != 0 && !out.contains(&x) {
            out.push(x);
        }
    };
    for (a, b) in A1_CHOICES {
        if let Some(x) = field.from_rational(&ratio(a, b)) {
            push(x);
        }
    }
    let g = field.primitive_root();
    for d in 2..=12u64 {
        if (p - 1).is_multiple_of(d) {
            push(field.pow(&g, (p - 1) / d));
        }
    }
    out
}

fn exhaustive_rows(order: usize) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = [1, -1, 2].iter().map(|&a| vec![a]).collect();
    for _ in 2..=order {
        rows = rows
            .into_iter()
            .flat_map(|r| {
                [-1, 0, 1].into_iter().map(move |c| {
                    let mut r = r.clone();
                    r.push(c);
                    r
                })
            })
            .collect();
    }
    rows
}

fn numeric_series(
    domain: DomainDescriptor,
    coeffs: &[i64],
    order: usize,
) -> Result<AnySeries, VerifyError> {
    let strings: Vec<String> = coeffs.iter().map(i64::to_string).collect();
    let json = SeriesJson {
        domain,
        order: Some(order),
        coeffs: strings,
    };
    Ok(AnySeries::from_json(&json)?)
}

enum Outcome<E> {
    Value(E),
    NotApplicable,
    Failed(String),
}

fn sweep_series<R: Ring>(
    spec: &SweepSpec,
    index: usize,
    f: &TruncatedSeries<R>,
) -> (Vec<Cell>, Vec<Discrepancy>) {
    let ring = f.ring();
    let iterates = f.iterates(spec.n.max as u32).expect("validated n range");
    let table = PowerCoefficientTable::new(f);
    let mut recursive = RecursiveEvaluator::new(f);
    let a1_is_one = ring.is_one(f.a1());
    let muck_ok = ring.is_field() && !a1_is_one && !ring.is_zero(f.a1());
    let methods = &spec.methods;

    let mut cells = Vec::new();
    let mut discrepancies = Vec::new();
    for k in spec.k.iter() {
        for n in spec.n.iter() {
            let n32 = n as u32;
            let oracle = iterates[n - 1].coeff(k).clone();
            let mut values = BTreeMap::new();
            let mut compared = 0;
            let mut failed = false;
            for (pos, &m) in methods.iter().enumerate() {
                let outcome = match m {
                    Method::Oracle => Outcome::Value(oracle.clone()),
                    Method::Recursive => to_outcome(recursive.coeff(k, n32)),
                    Method::Closed => to_outcome(coeff_closed_with(&table, k, n32)),
                    Method::ExplicitSmallK if k <= 5 => {
                        to_outcome(coeff_explicit_small_k(f, k, n32))
                    }
                    Method::Schroder if a1_is_one => to_outcome(coeff_schroder(f, k, n32)),
                    Method::Muckenhoupt if k == 2 && muck_ok => to_outcome(muckenhoupt_f2(f, n32)),
                    _ => Outcome::NotApplicable,
                };
                let first_oracle = m == Method::Oracle && !methods[..pos].contains(&Method::Oracle);
                let (text, diff) = match &outcome {
                    Outcome::Value(v) => {
                        let diff = (*v != oracle).then(|| ring.format(&ring.sub(v, &oracle)));
                        (ring.format(v), diff)
                    }
                    Outcome::NotApplicable => ("n/a".to_string(), None),
                    Outcome::Failed(e) => (format!("error: {e}"), Some(format!("error: {e}"))),
                };
                if !matches!(outcome, Outcome::NotApplicable) && !first_oracle {
                    compared += 1;
                }
                if let Some(difference) = diff {
                    failed = true;
                    discrepancies.push(Discrepancy {
                        k,
                        n,
                        domain: ring.descriptor(),
                        series: index,
                        methods: [Method::Oracle.name().to_string(), m.name().to_string()],
                        values: [ring.format(&oracle), text.clone()],
                        difference,
                    });
                }
                values.insert(m.name().to_string(), text);
            }
            let status = if failed {
                CellStatus::Fail
            } else if compared > 0 {
                CellStatus::Pass
            } else {
                CellStatus::NotApplicable
            };
            cells.push(Cell {
                k,
                n,
                domain: ring.descriptor(),
                series: index,
                methods: methods.iter().map(|m| m.name().to_string()).collect(),
                status,
                values,
            });
        }
    }
    (cells, discrepancies)
}

fn to_outcome<E, X: std::fmt::Display>(r: Result<E, X>) -> Outcome<E> {
    match r {
        Ok(v) => Outcome::Value(v),
        Err(e) => Outcome::Failed(e.to_string()),
    }
}
