use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::combin::multinomial;
use super::pmf::{ExactPmf, Precision};
use super::truncated;
use super::{ArithmeticMode, DistOptions, OccurrenceSpec};
use crate::error::{Error, Result};
use crate::numeric::{rat_pow, uint_to_int};
use crate::words::Sampling;

/// Joint law of the occurrence counts of a nonoverlapping pattern set.
///
/// Sliding counts use the inclusion-exclusion formula, either exactly or
/// with certified truncation. Block-wise counts are multinomial over the
/// `floor(n/m)` aligned blocks; they need patterns of a common length that
/// cannot match the same block, but self-overlap is harmless there.
pub fn joint_pmf(spec: &OccurrenceSpec, opts: &DistOptions) -> Result<ExactPmf> {
    match spec.sampling() {
        Sampling::Blockwise => super::reference::blockwise_joint(spec, opts.term_budget),
        Sampling::Sliding => {
            spec.check_nonoverlapping()?;
            sliding(spec, opts)
        }
    }
}

fn sliding(spec: &OccurrenceSpec, opts: &DistOptions) -> Result<ExactPmf> {
    match &opts.mode {
        ArithmeticMode::Exact => exact_sliding(spec, opts.term_budget),
        ArithmeticMode::Truncated { epsilon } => {
            if spec.arity() == 1 {
                truncated::univariate(spec, epsilon)
            } else {
                truncated::multivariate(spec, epsilon, opts.term_budget)
            }
        }
    }
}

/// Number of ways to place `k_i` pairwise disjoint copies of patterns with
/// lengths `m_i` in a string of length `n`:
/// `multinomial(n - sum m_i k_i + sum k_i; k_1, ..., k_l)`.
pub fn allocation_weight(n: u64, lengths: &[u64], k: &[u64]) -> BigUint {
    let used: u64 = lengths.iter().zip(k).map(|(m, k)| m * k).sum();
    if used > n {
        return BigUint::zero();
    }
    let slots = n - used + k.iter().sum::<u64>();
    multinomial(slots, k)
}

/// Lattice points `k >= 0` with `sum m_i k_i <= n`. Fails when the number of
/// `(s, k)` pairs with `s <= k` exceeds `budget`.
pub(crate) fn polytope(lengths: &[u64], n: u64, budget: u64) -> Result<Vec<Vec<u64>>> {
    fn rec(
        lengths: &[u64],
        remaining: u64,
        prefix: &mut Vec<u64>,
        pairs: u64,
        out: &mut Vec<Vec<u64>>,
        total_pairs: &mut u64,
        budget: u64,
    ) -> bool {
        let d = prefix.len();
        if d == lengths.len() {
            *total_pairs = total_pairs.saturating_add(pairs);
            out.push(prefix.clone());
            return *total_pairs <= budget;
        }
        for k in 0..=remaining / lengths[d] {
            prefix.push(k);
            let ok = rec(
                lengths,
                remaining - k * lengths[d],
                prefix,
                pairs.saturating_mul(k + 1),
                out,
                total_pairs,
                budget,
            );
            prefix.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    // cheap upper estimate before enumerating anything
    let estimate = lengths
        .iter()
        .map(|&m| ((n / m + 1) as f64) * ((n / m + 2) as f64) / 2.0)
        .product::<f64>();
    if estimate > 4.0 * budget as f64 * factorial_f64(lengths.len()) {
        return Err(budget_error(estimate, budget));
    }
    let mut out = Vec::new();
    let mut total = 0u64;
    if !rec(lengths, n, &mut Vec::new(), 1, &mut out, &mut total, budget) {
        return Err(budget_error(total as f64, budget));
    }
    Ok(out)
}

fn factorial_f64(l: usize) -> f64 {
    (1..=l).map(|i| i as f64).product()
}

fn budget_error(terms: f64, budget: u64) -> Error {
    Error::BudgetExceeded(format!(
        "exact evaluation needs about {terms:.3e} terms, over the budget of {budget}; \
         use truncated mode"
    ))
}

/// Replaces the coefficients of `p(z)` by those of `p(z - 1)`.
fn shift_down(a: &mut [BigInt]) {
    let deg = a.len().saturating_sub(1);
    for i in 0..deg {
        for j in (i..deg).rev() {
            let next = a[j + 1].clone();
            a[j] -= next;
        }
    }
}

/// Exact law: allocation weights scaled to integers over a common
/// denominator, then one Taylor shift by -1 per variable.
fn exact_sliding(spec: &OccurrenceSpec, budget: u64) -> Result<ExactPmf> {
    let n = spec.n();
    let lengths = spec.lengths();
    let l = lengths.len();
    let probs = spec.probs();
    let points = polytope(&lengths, n, budget)?;

    let max_k: Vec<u64> = lengths.iter().map(|&m| n / m).collect();
    let num_pows: Vec<Vec<BigInt>> = (0..l).map(|i| powers(probs[i].numer(), max_k[i])).collect();
    let den_pows: Vec<Vec<BigInt>> = (0..l).map(|i| powers(probs[i].denom(), max_k[i])).collect();

    // W(k) = allocations * prod a_i^k_i b_i^(K_i - k_i); the law is W shifted, over prod b_i^K_i
    let mut weights: BTreeMap<Vec<u64>, BigInt> = BTreeMap::new();
    for k in points {
        let mut w = uint_to_int(allocation_weight(n, &lengths, &k));
        for i in 0..l {
            let ki = k[i] as usize;
            w *= &num_pows[i][ki];
            w *= &den_pows[i][max_k[i] as usize - ki];
        }
        weights.insert(k, w);
    }

    for d in 0..l {
        let mut lines: BTreeMap<Vec<u64>, Vec<BigInt>> = BTreeMap::new();
        for (k, w) in std::mem::take(&mut weights) {
            let mut key = k.clone();
            key[d] = 0;
            let line = lines.entry(key).or_default();
            let idx = k[d] as usize;
            if line.len() <= idx {
                line.resize(idx + 1, BigInt::zero());
            }
            line[idx] = w;
        }
        for (key, mut line) in lines {
            shift_down(&mut line);
            for (idx, w) in line.into_iter().enumerate() {
                let mut k = key.clone();
                k[d] = idx as u64;
                weights.insert(k, w);
            }
        }
    }

    let denom: BigInt = (0..l)
        .map(|i| den_pows[i][max_k[i] as usize].clone())
        .product();
    let masses = weights
        .into_iter()
        .map(|(s, w)| (s, BigRational::new(w, denom.clone())));
    Ok(ExactPmf::from_masses(l, masses, Precision::Exact))
}

fn powers(base: &BigInt, max: u64) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(max as usize + 1);
    let mut acc = BigInt::one();
    for _ in 0..=max {
        out.push(acc.clone());
        acc *= base;
    }
    out
}

/// The explicit alternating sum for a single count vector `s`:
///
/// `sum_{k >= s, sum m_i k_i <= n} (-1)^{sum (k_i - s_i)}
///   multinomial(n - sum m_i k_i + sum k_i; s, k - s) prod P(w_i)^{k_i}`.
pub fn joint_mass(spec: &OccurrenceSpec, counts: &[u64]) -> Result<BigRational> {
    spec.check_nonoverlapping()?;
    if counts.len() != spec.arity() {
        return Err(Error::InvalidArgument(format!(
            "count vector has {} entries for {} words",
            counts.len(),
            spec.arity()
        )));
    }
    let n = spec.n();
    let lengths = spec.lengths();
    let probs = spec.probs();
    let used: u64 = lengths.iter().zip(counts).map(|(m, s)| m * s).sum();
    if used > n {
        return Ok(BigRational::zero());
    }
    // enumerate the excess e = k - s over the remaining room
    let remaining_lengths = lengths.clone();
    let excesses = polytope(&remaining_lengths, n - used, u64::MAX)?;
    let mut acc = BigRational::zero();
    for e in excesses {
        let k: Vec<u64> = counts.iter().zip(&e).map(|(s, e)| s + e).collect();
        let used_k: u64 = lengths.iter().zip(&k).map(|(m, k)| m * k).sum();
        let slots = n - used_k + k.iter().sum::<u64>();
        let parts: Vec<u64> = counts.iter().chain(e.iter()).copied().collect();
        let mut term = BigRational::from_integer(uint_to_int(multinomial(slots, &parts)));
        for (p, &ki) in probs.iter().zip(&k) {
            term *= rat_pow(p, ki);
        }
        if e.iter().sum::<u64>() % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}
