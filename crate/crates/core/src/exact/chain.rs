//! Prefix chains `w_1 ⊏ w_2 ⊏ ... ⊏ w_l`.
//!
//! Chain words overlap each other, so the single-set formula does not apply
//! directly. Instead let `e_j` count the positions whose longest matching
//! chain word is `w_j`. With `F_A(z) = sum_k A(k) z^k` built from the
//! disjoint-allocation weights, the generating function of `e` is
//! `F_A(u_1 - 1, u_2 - u_1, ..., u_l - u_{l-1})`, and the ordinary counts are
//! the suffix sums `N_i = e_i + ... + e_l`.
//!
//! This needs more than the prefix relation: no chain word may sit against a
//! longer one at any nonzero offset. For `{001, 0010011}` the short word also
//! occurs inside the long one and the identity fails.

use num_rational::BigRational;

use super::genpoly::GenPoly;
use super::joint::{allocation_weight, polytope};
use super::pmf::{ExactPmf, Precision};
use super::OccurrenceSpec;
use crate::error::{Error, Result};
use crate::numeric::{rat_pow, uint_to_int};
use crate::words::{is_prefix_chain, patterns_overlap, PartialWord, Sampling};

/// Default cap on stored polynomial terms.
pub const DEFAULT_POLY_BUDGET: usize = 2_000_000;

/// Accepts chains that are strictly increasing prefix chains of individually
/// nonoverlapping words in which no word meets a longer one at a nonzero
/// offset.
pub fn check_chain(words: &[PartialWord]) -> Result<()> {
    if words.is_empty() {
        return Err(Error::NotAChain("empty word list".into()));
    }
    if !is_prefix_chain(words) {
        return Err(Error::NotAChain(
            "each word must be a proper prefix of the next".into(),
        ));
    }
    for (i, w) in words.iter().enumerate() {
        if !w.is_nonoverlapping() {
            return Err(Error::NotAChain(format!("word {} overlaps itself", i + 1)));
        }
    }
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            if patterns_overlap(words[i].letters(), words[j].letters(), true) {
                return Err(Error::NotAChain(format!(
                    "word {} meets word {} at a nonzero offset",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

fn check_spec(spec: &OccurrenceSpec) -> Result<()> {
    if spec.sampling() != Sampling::Sliding {
        return Err(Error::InvalidArgument(
            "chain laws use sliding counts".into(),
        ));
    }
    check_chain(spec.words())
}

/// Joint law of the exclusive counts `e_j`.
pub fn chain_exclusive_pmf(spec: &OccurrenceSpec, budget: usize) -> Result<ExactPmf> {
    check_spec(spec)?;
    let n = spec.n();
    let lengths = spec.lengths();
    let probs = spec.probs();
    let l = lengths.len();
    let points = polytope(&lengths, n, budget as u64).map_err(|_| {
        Error::BudgetExceeded(format!(
            "allocation polytope exceeds the budget of {budget} terms; use the automaton oracle"
        ))
    })?;
    if points.len() > budget {
        return Err(Error::BudgetExceeded(format!(
            "{} allocation terms, over the budget of {budget}; use the automaton oracle",
            points.len()
        )));
    }
    let fa = GenPoly::from_terms(
        l,
        points.into_iter().map(|k| {
            let mut c = BigRational::from_integer(uint_to_int(allocation_weight(n, &lengths, &k)));
            for (p, &ki) in probs.iter().zip(&k) {
                c *= rat_pow(p, ki);
            }
            (k, c)
        }),
    );
    let subs: Vec<GenPoly> = (0..l)
        .map(|i| {
            let prev = if i == 0 {
                GenPoly::one(l)
            } else {
                GenPoly::var(l, i - 1)
            };
            GenPoly::var(l, i).sub(&prev)
        })
        .collect();
    let fb = fa.compose(&subs, budget)?;
    Ok(ExactPmf::from_masses(l, fb.into_terms(), Precision::Exact))
}

/// Joint law of the ordinary sliding counts of the chain words.
pub fn chain_pmf(spec: &OccurrenceSpec, budget: usize) -> Result<ExactPmf> {
    let exclusive = chain_exclusive_pmf(spec, budget)?;
    Ok(exclusive.map_counts(spec.arity(), exclusive_to_counts))
}

/// `N_i = e_i + ... + e_l`.
pub(crate) fn exclusive_to_counts(e: &[u64]) -> Vec<u64> {
    let mut out = vec![0; e.len()];
    let mut acc = 0;
    for i in (0..e.len()).rev() {
        acc += e[i];
        out[i] = acc;
    }
    out
}
