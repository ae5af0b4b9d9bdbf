use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{ExactPmf, OccurrenceSpec, Precision};
use crate::model::IidModel;
use crate::words::{count_occurrences, Symbol};

/// Default cap on the number of enumerated strings, `2^24`.
pub const DEFAULT_BRUTE_BUDGET: u64 = 1 << 24;

/// Law of `statistic(x)` over all `q^n` strings `x`, each weighted by its
/// exact model probability.
pub fn brute_force_law<F>(
    model: &IidModel,
    n: u64,
    arity: usize,
    budget: u64,
    statistic: F,
) -> Result<ExactPmf>
where
    F: Fn(&[Symbol]) -> Vec<u64>,
{
    let q = model.alphabet().size() as u64;
    let total = u32::try_from(n)
        .ok()
        .and_then(|n| q.checked_pow(n))
        .filter(|&t| t <= budget)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "enumerating {q}^{n} strings exceeds the budget of {budget}"
            ))
        })?;
    let n = n as usize;
    // integer letter weights over a common denominator
    let den = model.probs().iter().fold(BigInt::one(), |acc, p| {
        num_integer::lcm(acc, p.denom().clone())
    });
    let weights: Vec<BigInt> = model
        .probs()
        .iter()
        .map(|p| p.numer() * (&den / p.denom()))
        .collect();
    let uniform = model.is_uniform();

    let mut text = vec![0 as Symbol; n];
    let mut acc: BTreeMap<Vec<u64>, BigInt> = BTreeMap::new();
    for code in 0..total {
        let mut c = code;
        for s in text.iter_mut().rev() {
            *s = (c % q) as Symbol;
            c /= q;
        }
        let w = if uniform {
            BigInt::one()
        } else {
            text.iter()
                .fold(BigInt::one(), |a, &s| a * &weights[usize::from(s)])
        };
        if w.is_zero() {
            continue;
        }
        let counts = statistic(&text);
        debug_assert_eq!(counts.len(), arity);
        *acc.entry(counts).or_insert_with(BigInt::zero) += w;
    }
    let scale = if uniform {
        BigInt::from(total)
    } else {
        num_traits::pow(den, n)
    };
    Ok(ExactPmf::from_masses(
        arity,
        acc.into_iter()
            .map(|(k, w)| (k, BigRational::new(w, scale.clone()))),
        Precision::Exact,
    ))
}

/// Joint law of the occurrence counts by exhaustive enumeration. Works for
/// any pattern set, overlapping or not, in either counting mode.
pub fn brute_force_joint_pmf(spec: &OccurrenceSpec, budget: u64) -> Result<ExactPmf> {
    let words = spec.words().to_vec();
    let mode = spec.sampling();
    brute_force_law(spec.model(), spec.n(), spec.arity(), budget, |x| {
        words
            .iter()
            .map(|w| count_occurrences(x, w, mode))
            .collect()
    })
}
