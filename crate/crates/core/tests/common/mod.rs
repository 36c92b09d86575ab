//! Test-side oracles, independent of the library's series code.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use fps_iterate::coefficients::Rationals;
use fps_iterate::series::TruncatedSeries;

pub type Q = BigRational;

pub fn q(p: i64, d: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(d))
}

/// Dense product of two polynomials given by coefficient vectors indexed by degree, cut at `deg`.
fn poly_mul(a: &[Q], b: &[Q], deg: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); deg + 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j <= deg {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// `f(g(x))` truncated at `x^K`, as `sum_i f_i * g^i` with every power formed
/// from scratch. Both inputs hold `a_1..a_K`.
pub fn naive_compose(f: &[Q], g: &[Q]) -> Vec<Q> {
    let k = f.len();
    let mut g_dense = vec![Q::zero()];
    g_dense.extend(g.iter().cloned());
    let mut total = vec![Q::zero(); k + 1];
    for (i, fi) in f.iter().enumerate() {
        let mut power = vec![Q::one()];
        for _ in 0..=i {
            power = poly_mul(&power, &g_dense, k);
        }
        for (d, c) in power.iter().enumerate() {
            total[d] += fi * c;
        }
    }
    total[1..].to_vec()
}

/// `f^(n)` by the right fold `f ∘ f^(n-1)`.
pub fn naive_iterate(f: &[Q], n: u32) -> Vec<Q> {
    let mut acc = f.to_vec();
    for _ in 1..n {
        acc = naive_compose(f, &acc);
    }
    acc
}

pub const A1_CHOICES: [(i64, i64); 6] = [(1, 1), (-1, 1), (2, 1), (1, 2), (3, 1), (-2, 1)];

/// `a_1` from the six standard choices, `a_j = p/d` with `p, d in [-9, 9]`, `d != 0`.
pub fn random_coeffs(rng: &mut ChaCha8Rng, order: usize) -> Vec<Q> {
    let (p, d) = A1_CHOICES[rng.gen_range(0..A1_CHOICES.len())];
    let mut out = vec![q(p, d)];
    for _ in 1..order {
        let p = rng.gen_range(-9..=9);
        let d = loop {
            let d = rng.gen_range(-9..=9);
            if d != 0 {
                break d;
            }
        };
        out.push(q(p, d));
    }
    out
}

pub fn series(coeffs: Vec<Q>) -> TruncatedSeries<Rationals> {
    TruncatedSeries::new(Rationals, coeffs).unwrap()
}

/// Pascal's triangle up to row `n`.
pub fn pascal(n: usize) -> Vec<Vec<u128>> {
    let mut rows = vec![vec![1u128]];
    for r in 1..=n {
        let prev = &rows[r - 1];
        let mut row = vec![1u128; r + 1];
        for c in 1..r {
            row[c] = prev[c - 1] + prev[c];
        }
        rows.push(row);
    }
    rows
}

pub fn bin_path() -> &'static str {
    env!("CARGO_BIN_EXE_fps-iterate")
}

/// Writes `contents` to a fresh file in the temp directory.
pub fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("fps-iterate-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_cli(args: &[&str]) -> Run {
    let out = std::process::Command::new(bin_path())
        .args(args)
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}
