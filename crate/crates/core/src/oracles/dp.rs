use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::automaton::{CountAutomaton, DEFAULT_STATE_BUDGET};
use crate::error::{Error, Result};
use crate::exact::{ExactPmf, OccurrenceSpec, Precision};
use crate::words::{Sampling, Symbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpOptions {
    /// Counts above the cap are pooled at `cap + 1`. `None` means no pooling
    /// (cap = the largest possible count).
    pub count_cap: Option<u64>,
    /// Fixed letters read before the `n` random ones; their occurrences count.
    pub forced_prefix: Vec<Symbol>,
    pub state_budget: usize,
    /// Cap on live `(state, counts)` entries at any position.
    pub entry_budget: usize,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions {
            count_cap: None,
            forced_prefix: Vec::new(),
            state_budget: DEFAULT_STATE_BUDGET,
            entry_budget: 10_000_000,
        }
    }
}

/// Joint law of sliding counts by dynamic programming over
/// `(automaton state, count vector)` with exact integer weights. Valid for
/// any pattern set.
pub fn automaton_dp_pmf(spec: &OccurrenceSpec, opts: &DpOptions) -> Result<ExactPmf> {
    if spec.sampling() != Sampling::Sliding {
        return Err(Error::InvalidArgument(
            "the automaton oracle counts sliding occurrences".into(),
        ));
    }
    let model = spec.model();
    let q = model.alphabet().size();
    if opts.forced_prefix.iter().any(|&s| usize::from(s) >= q) {
        return Err(Error::InvalidArgument(
            "forced prefix letter outside the alphabet".into(),
        ));
    }
    let automaton = CountAutomaton::new(spec.words(), q, opts.state_budget)?;
    let l = spec.arity();
    let total_len = spec.n() + opts.forced_prefix.len() as u64;
    let shortest = spec.lengths().into_iter().min().unwrap_or(1);
    let cap = opts
        .count_cap
        .unwrap_or_else(|| (total_len + 1).saturating_sub(shortest));

    let den = model.probs().iter().fold(BigInt::one(), |acc, p| {
        num_integer::lcm(acc, p.denom().clone())
    });
    let weights: Vec<(Symbol, BigInt)> = model
        .probs()
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(a, p)| (a as Symbol, p.numer() * (&den / p.denom())))
        .collect();

    let bump = |counts: &mut Vec<u64>, emitted: &[u32]| {
        for &i in emitted {
            let c = &mut counts[i as usize];
            if *c <= cap {
                *c += 1;
            }
        }
    };

    let mut state = automaton.start();
    let mut counts = vec![0u64; l];
    for &a in &opts.forced_prefix {
        let (next, emitted) = automaton.step(state, a);
        bump(&mut counts, emitted);
        state = next;
    }
    let mut layer: HashMap<(u32, Vec<u64>), BigInt> = HashMap::new();
    layer.insert((state, counts), BigInt::one());
    for _ in 0..spec.n() {
        let mut next_layer: HashMap<(u32, Vec<u64>), BigInt> =
            HashMap::with_capacity(layer.len() * 2);
        for ((s, counts), w) in &layer {
            for (a, wa) in &weights {
                let (t, emitted) = automaton.step(*s, *a);
                let mut c = counts.clone();
                bump(&mut c, emitted);
                *next_layer.entry((t, c)).or_insert_with(BigInt::zero) += w * wa;
            }
        }
        if next_layer.len() > opts.entry_budget {
            return Err(Error::BudgetExceeded(format!(
                "dynamic programme exceeds {} live entries",
                opts.entry_budget
            )));
        }
        layer = next_layer;
    }

    let scale = num_traits::pow(den, spec.n() as usize);
    let mut merged: HashMap<Vec<u64>, BigInt> = HashMap::new();
    for ((_, counts), w) in layer {
        *merged.entry(counts).or_insert_with(BigInt::zero) += w;
    }
    Ok(ExactPmf::from_masses(
        l,
        merged
            .into_iter()
            .map(|(k, w)| (k, BigRational::new(w, scale.clone()))),
        Precision::Exact,
    ))
}
