use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{enumerate_subsets, IterationError};

/// `C(n, k)` as an exact integer; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

/// Counts the iterations of `alpha` nested loops
///
/// ```text
/// for i_1 in 0..=n-alpha { for i_2 in 0..=n-alpha-i_1 { ... count += 1 } }
/// ```
///
/// which equals `C(n, alpha)`. An empty outer range (`n < alpha`) gives 0.
pub fn nested_sum_binomial(n: u64, alpha: u64) -> Result<BigUint, IterationError> {
    if alpha == 0 {
        return Err(IterationError::ZeroAlpha);
    }
    if n < alpha {
        return Ok(BigUint::zero());
    }
    fn count(depth: u64, left: u64) -> u128 {
        if depth == 0 {
            return 1;
        }
        let mut total = 0u128;
        for i in 0..=left {
            total += count(depth - 1, left - i);
        }
        total
    }
    Ok(BigUint::from(count(alpha, n - alpha)))
}

/// `sum_{p=1}^{n} p (p+1) ... (p+alpha-1)`, checked against
/// `n (n+1) ... (n+alpha) / (alpha+1)`.
pub fn rising_product_sum(n: u64, alpha: u64) -> Result<BigUint, IterationError> {
    if n == 0 {
        return Err(IterationError::ZeroIterations);
    }
    if alpha == 0 {
        return Err(IterationError::ZeroAlpha);
    }
    let rising = |p: u64| (p..p + alpha).fold(BigUint::one(), |acc, t| acc * t);
    let loop_sum = (1..=n).fold(BigUint::zero(), |acc, p| acc + rising(p));
    let product = (n..=n + alpha).fold(BigUint::one(), |acc, t| acc * t);
    let divisor = BigUint::from(alpha + 1);
    if !(&product % &divisor).is_zero() || product / divisor != loop_sum {
        return Err(IterationError::IdentityViolated(format!(
            "rising product sum for n = {n}, alpha = {alpha}"
        )));
    }
    Ok(loop_sum)
}

/// Number of closed-form summands `sum_{alpha=2}^{k-1} |subsets(k, alpha)|`,
/// checked against `2^(k-2) - 1`.
pub fn count_closed_form_summands(k: usize) -> Result<BigUint, IterationError> {
    if k < 3 {
        return Err(IterationError::KTooSmall(k));
    }
    let mut total = BigUint::zero();
    for alpha in 2..k {
        total += enumerate_subsets(k, alpha)?.len();
    }
    let expected = (BigUint::one() << (k - 2)) - 1u32;
    if total != expected {
        return Err(IterationError::IdentityViolated(format!(
            "{total} closed-form summands for k = {k}, expected {expected}"
        )));
    }
    Ok(total)
}
