//! Big-integer combinatorics. Everything is computed by multiplicative
//! cancellation, never through factorial tables, so arguments in the billions
//! are fine as long as the smaller index stays moderate.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        // exact at every step: acc = C(n-k+i, i)
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

/// `total! / (parts[0]! ... parts[l-1]! (total - sum parts)!)`, zero when the
/// parts exceed `total`. Computed as a product of binomials.
pub fn multinomial(total: u64, parts: &[u64]) -> BigUint {
    let mut remaining = total;
    let mut acc = BigUint::one();
    for &p in parts {
        if p > remaining {
            return BigUint::zero();
        }
        acc *= binomial(remaining, p);
        remaining -= p;
    }
    acc
}

/// Number of ways to place `k` disjoint copies of a nonoverlapping word of
/// length `m` in a string of length `n`: `C(n - mk + k, k)`, or zero when
/// the copies do not fit.
pub fn allocation_count(n: u64, m: u64, k: u64) -> BigUint {
    match m.checked_mul(k) {
        Some(used) if used <= n => binomial(n - used + k, k),
        _ => BigUint::zero(),
    }
}

/// Number of surjections from a `t`-set onto an `s`-set,
/// `sum_r (-1)^(s-r) C(s, r) r^t`.
pub fn surjection_count(t: u32, s: u32) -> BigUint {
    let mut acc = BigInt::zero();
    for r in 0..=s {
        let term = BigInt::from(binomial(u64::from(s), u64::from(r)))
            * num_traits::pow(BigInt::from(r), t as usize);
        if (s - r).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.to_biguint().expect("surjection counts are nonnegative")
}
