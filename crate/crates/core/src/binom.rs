//! Exact integer binomial coefficients.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// C(n, k) as an exact integer, with C(n, k) = 0 for k < 0 or k > n.
///
/// Multiplicative formula with running division; every intermediate
/// quotient is an integer because each prefix is itself a binomial.
pub fn binom_exact(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
