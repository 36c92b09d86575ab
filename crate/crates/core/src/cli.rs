//! The `fps-iterate` command line.
//!
//! `iterate` and `coeff` always print JSON. `formula`, `verify` and
//! `identities` print plain text unless `--json` is given. Exit codes: 0 on
//! success, 1 when a verification finds a mismatch, 2 on usage or input
//! errors.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::coefficients::{PolynomialRing, Ring};
use crate::iteration::{
    binomial, coeff_closed, coeff_explicit_small_k, coeff_recursive, coeff_schroder,
    muckenhoupt_f2, nested_sum_binomial, rising_product_sum,
};
use crate::multinomial::factorial;
use crate::series::{AnySeries, SeriesJson, TruncatedSeries};
use crate::verify::{
    adjudicate_typo_cases, run_sweep_with_threads, A1Mode, CellStatus, DiscrepancyReport, SweepSpec,
};

/// Environment variable capping the number of verification workers (0 = auto).
pub const THREADS_ENV: &str = "FPS_ITERATE_THREADS";

/// Default guardrail for `formula`.
pub const FORMULA_LIMIT: usize = 8;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fps-iterate",
    version,
    about = "Exact coefficients of iterated formal power series"
)]
struct Cli {
    /// Print JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print f^(n) as series JSON.
    Iterate {
        /// Series JSON file, or `-` for stdin.
        file: PathBuf,
        n: u32,
        /// Truncation order of the result.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Print one coefficient f_k^(n).
    Coeff {
        file: PathBuf,
        k: usize,
        n: u32,
        #[arg(long, value_enum, default_value_t = CoeffMethod::Oracle)]
        method: CoeffMethod,
    },
    /// Print f_k^(n) as a polynomial in a1..ak.
    Formula {
        k: usize,
        n: u32,
        #[arg(long, value_enum, default_value_t = A1Arg::Generic)]
        a1: A1Arg,
        /// Lift the k, n <= 8 limit.
        #[arg(long)]
        force: bool,
    },
    /// Run a cross-method verification sweep.
    Verify {
        /// Sweep spec JSON file.
        #[arg(long, conflicts_with = "preset")]
        sweep_spec: Option<PathBuf>,
        /// One of acceptance, symbolic, schroder, prime, typo-adjudication.
        #[arg(long)]
        preset: Option<String>,
        /// Override the largest k of the sweep.
        #[arg(long)]
        k_max: Option<usize>,
        /// Override the largest n of the sweep.
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Check the nested-sum and rising-product identities on a grid.
    Identities {
        #[arg(long, default_value_t = 25)]
        n_max: u64,
        #[arg(long, default_value_t = 8)]
        alpha_max: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CoeffMethod {
    Oracle,
    Recursive,
    Closed,
    Small,
    Schroder,
    Muckenhoupt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum A1Arg {
    Generic,
    One,
}

impl From<A1Arg> for A1Mode {
    fn from(a: A1Arg) -> Self {
        match a {
            A1Arg::Generic => A1Mode::Generic,
            A1Arg::One => A1Mode::One,
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.to_string(),
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let json = cli.json;
    let result = match cli.command {
        Command::Iterate { file, n, order } => cmd_iterate(&file, n, order, stdout),
        Command::Coeff { file, k, n, method } => cmd_coeff(&file, k, n, method, stdout),
        Command::Formula { k, n, a1, force } => cmd_formula(k, n, a1, force, json, stdout),
        Command::Verify {
            sweep_spec,
            preset,
            k_max,
            n_max,
        } => cmd_verify(
            sweep_spec.as_deref(),
            preset.as_deref(),
            k_max,
            n_max,
            json,
            stdout,
        ),
        Command::Identities { n_max, alpha_max } => cmd_identities(n_max, alpha_max, json, stdout),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| usage(format!("stdin: {e}")))?;
    } else {
        text =
            std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn read_series(path: &Path, order: Option<usize>) -> Result<AnySeries, Failure> {
    let json = SeriesJson::parse(&read_input(path)?).map_err(usage)?;
    let Some(order) = order else {
        return AnySeries::from_json(&json).map_err(usage);
    };
    // parse at the larger order, then cut down to the requested one
    let given = json
        .order
        .unwrap_or(json.coeffs.len())
        .max(json.coeffs.len());
    let series = AnySeries::from_json(&json.with_order(order.max(given))).map_err(usage)?;
    let cut = match &series {
        AnySeries::Rational(s) => s.truncate(order).map(AnySeries::Rational),
        AnySeries::Prime(s) => s.truncate(order).map(AnySeries::Prime),
        AnySeries::Symbolic(s) => s.truncate(order).map(AnySeries::Symbolic),
    };
    cut.map_err(usage)
}

fn line(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    writeln!(out, "{text}").map_err(|e| Failure {
        code: EXIT_USAGE,
        message: format!("write failed: {e}"),
    })
}

fn cmd_iterate(file: &Path, n: u32, order: Option<usize>, out: &mut dyn Write) -> Outcome {
    fn go<R: Ring>(f: &TruncatedSeries<R>, n: u32) -> Result<SeriesJson, Failure> {
        Ok(f.iterate(n).map_err(usage)?.series.to_json())
    }
    if order == Some(0) {
        return Err(usage("truncation order must be at least 1"));
    }
    let json = match read_series(file, order)? {
        AnySeries::Rational(f) => go(&f, n)?,
        AnySeries::Prime(f) => go(&f, n)?,
        AnySeries::Symbolic(f) => go(&f, n)?,
    };
    line(out, &json.to_json_string())?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CoeffOutput<'a> {
    k: usize,
    n: u32,
    method: &'a str,
    value: String,
}

fn cmd_coeff(file: &Path, k: usize, n: u32, method: CoeffMethod, out: &mut dyn Write) -> Outcome {
    fn go<R: Ring>(
        f: &TruncatedSeries<R>,
        k: usize,
        n: u32,
        method: CoeffMethod,
    ) -> Result<String, Failure> {
        let value = match method {
            CoeffMethod::Oracle => {
                if k == 0 || k > f.order() {
                    return Err(usage(format!("k = {k} outside 1..={}", f.order())));
                }
                Ok(f.iterate(n).map_err(usage)?.series.coeff(k).clone())
            }
            CoeffMethod::Recursive => coeff_recursive(f, k, n),
            CoeffMethod::Closed => coeff_closed(f, k, n),
            CoeffMethod::Small => coeff_explicit_small_k(f, k, n),
            CoeffMethod::Schroder => coeff_schroder(f, k, n),
            CoeffMethod::Muckenhoupt => {
                if k != 2 {
                    return Err(usage("the muckenhoupt method only computes k = 2"));
                }
                muckenhoupt_f2(f, n)
            }
        };
        Ok(f.ring().format(&value.map_err(usage)?))
    }
    // without an explicit order the coefficients are the whole polynomial,
    // so padding up to k is exact
    let json = SeriesJson::parse(&read_input(file)?).map_err(usage)?;
    let json = match json.order {
        None => {
            let order = json.coeffs.len().max(k);
            json.with_order(order)
        }
        Some(_) => json,
    };
    let value = match AnySeries::from_json(&json).map_err(usage)? {
        AnySeries::Rational(f) => go(&f, k, n, method)?,
        AnySeries::Prime(f) => go(&f, k, n, method)?,
        AnySeries::Symbolic(f) => go(&f, k, n, method)?,
    };
    let name = method.to_possible_value().expect("no skipped variants");
    let output = CoeffOutput {
        k,
        n,
        method: name.get_name(),
        value,
    };
    line(out, &serde_json::to_string(&output).expect("serializes"))?;
    Ok(EXIT_OK)
}

/// `f_k^(n)` over `Q[a1..ak]`, by the closed form or, with `a1 = 1`, the binomial form.
pub fn symbolic_formula(k: usize, n: u32, a1: A1Mode) -> Result<String, String> {
    let ring = PolynomialRing::new(k).map_err(|e| e.to_string())?;
    let mut coeffs = vec![match a1 {
        A1Mode::Generic => ring.variable(1).map_err(|e| e.to_string())?,
        A1Mode::One => ring.one(),
    }];
    for j in 2..=k {
        coeffs.push(ring.variable(j).map_err(|e| e.to_string())?);
    }
    let f = TruncatedSeries::new(ring, coeffs).map_err(|e| e.to_string())?;
    let value = match a1 {
        A1Mode::Generic => coeff_closed(&f, k, n),
        A1Mode::One => coeff_schroder(&f, k, n),
    };
    value.map(|v| ring.format(&v)).map_err(|e| e.to_string())
}

fn cmd_formula(
    k: usize,
    n: u32,
    a1: A1Arg,
    force: bool,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    if k == 0 || n == 0 {
        return Err(usage("k and n must be at least 1"));
    }
    if !force && (k > FORMULA_LIMIT || n as usize > FORMULA_LIMIT) {
        return Err(usage(format!(
            "k = {k}, n = {n} exceeds the limit of {FORMULA_LIMIT}; pass --force to override"
        )));
    }
    let formula = symbolic_formula(k, n, a1.into()).map_err(usage)?;
    if json {
        let name = a1.to_possible_value().expect("no skipped variants");
        let v = serde_json::json!({"k": k, "n": n, "a1": name.get_name(), "formula": formula});
        line(out, &v.to_string())?;
    } else {
        line(out, &formula)?;
    }
    Ok(EXIT_OK)
}

fn threads_from_env() -> Result<usize, Failure> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            usage(format!(
                "{THREADS_ENV} must be a non-negative integer, got {v:?}"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(usage(format!("{THREADS_ENV}: {e}"))),
    }
}

fn cmd_verify(
    spec_file: Option<&Path>,
    preset: Option<&str>,
    k_max: Option<usize>,
    n_max: Option<usize>,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let report = match (spec_file, preset) {
        (None, Some("typo-adjudication")) => adjudicate_typo_cases(),
        (spec_file, preset) => {
            let mut spec = match (spec_file, preset) {
                (Some(path), None) => SweepSpec::from_json(&read_input(path)?).map_err(usage)?,
                (None, Some(name)) => SweepSpec::preset(name).ok_or_else(|| {
                    usage(format!(
                        "unknown preset {name:?}; known: {}",
                        crate::verify::PRESETS.join(", ")
                    ))
                })?,
                _ => return Err(usage("give exactly one of --sweep-spec or --preset")),
            };
            if let Some(k) = k_max {
                spec.k.max = k;
            }
            if let Some(n) = n_max {
                spec.n.max = n;
            }
            run_sweep_with_threads(&spec, threads_from_env()?).map_err(usage)?
        }
    };
    if json {
        line(out, &report.to_json_string())?;
    } else {
        print_report(&report, out)?;
    }
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    })
}

const SHOWN_DISCREPANCIES: usize = 20;

fn print_report(report: &DiscrepancyReport, out: &mut dyn Write) -> Result<(), Failure> {
    let counts = report.status_counts();
    let count = |s| counts.get(&s).copied().unwrap_or(0);
    line(
        out,
        &format!(
            "cells: {} (pass {}, fail {}, n/a {})",
            report.cells.len(),
            count(CellStatus::Pass),
            count(CellStatus::Fail),
            count(CellStatus::NotApplicable)
        ),
    )?;
    for v in &report.verdicts {
        let agreeing = if v.agreeing.is_empty() {
            "none".to_string()
        } else {
            v.agreeing.join("; ")
        };
        let status = if v.conclusive {
            "conclusive"
        } else {
            "inconclusive"
        };
        line(
            out,
            &format!("{}: agrees: {agreeing} ({status})", v.question),
        )?;
        line(out, &format!("  oracle: {}", v.oracle_form))?;
    }
    for d in report.discrepancies.iter().take(SHOWN_DISCREPANCIES) {
        line(
            out,
            &format!(
                "mismatch k={} n={} {} series {}: {} = {}, {} = {}, difference {}",
                d.k,
                d.n,
                d.domain,
                d.series,
                d.methods[0],
                d.values[0],
                d.methods[1],
                d.values[1],
                d.difference
            ),
        )?;
    }
    if report.discrepancies.len() > SHOWN_DISCREPANCIES {
        line(
            out,
            &format!(
                "... {} more",
                report.discrepancies.len() - SHOWN_DISCREPANCIES
            ),
        )?;
    }
    line(out, &format!("mismatches: {}", report.mismatches))?;
    line(
        out,
        if report.passed() {
            "result: pass"
        } else {
            "result: fail"
        },
    )
}

#[derive(Serialize)]
struct IdentityCheck {
    identity: &'static str,
    checked: usize,
    failed: usize,
    failures: Vec<String>,
}

fn cmd_identities(n_max: u64, alpha_max: u64, json: bool, out: &mut dyn Write) -> Outcome {
    if n_max == 0 || alpha_max == 0 {
        return Err(usage("--n-max and --alpha-max must be at least 1"));
    }
    let mut nested = IdentityCheck {
        identity: "nested_sum_binomial",
        checked: 0,
        failed: 0,
        failures: vec![],
    };
    let mut rising = IdentityCheck {
        identity: "rising_product_sum",
        checked: 0,
        failed: 0,
        failures: vec![],
    };
    let mut first = IdentityCheck {
        identity: "rising_product_sum_at_n_1",
        checked: 0,
        failed: 0,
        failures: vec![],
    };
    let record = |c: &mut IdentityCheck, ok: bool, what: String| {
        c.checked += 1;
        if !ok {
            c.failed += 1;
            c.failures.push(what);
        }
    };
    for n in 1..=n_max {
        for alpha in 1..=alpha_max {
            let ok = nested_sum_binomial(n, alpha).is_ok_and(|v| v == binomial(n, alpha));
            record(&mut nested, ok, format!("n={n} alpha={alpha}"));
            record(
                &mut rising,
                rising_product_sum(n, alpha).is_ok(),
                format!("n={n} alpha={alpha}"),
            );
        }
    }
    for alpha in 1..=alpha_max {
        let ok = rising_product_sum(1, alpha).is_ok_and(|v| v == factorial(alpha as u32));
        record(&mut first, ok, format!("alpha={alpha}"));
    }
    let checks = [nested, rising, first];
    let passed = checks.iter().all(|c| c.failed == 0);
    if json {
        let v = serde_json::json!({"n_max": n_max, "alpha_max": alpha_max, "checks": checks, "passed": passed});
        line(out, &v.to_string())?;
    } else {
        line(
            out,
            &format!("{:<28}{:>8}{:>8}", "identity", "checked", "failed"),
        )?;
        for c in &checks {
            line(
                out,
                &format!("{:<28}{:>8}{:>8}", c.identity, c.checked, c.failed),
            )?;
            for f in c.failures.iter().take(SHOWN_DISCREPANCIES) {
                line(out, &format!("  fail: {f}"))?;
            }
        }
        line(
            out,
            if passed {
                "result: pass"
            } else {
                "result: fail"
            },
        )?;
    }
    Ok(if passed { EXIT_OK } else { EXIT_MISMATCH })
}
