//! Turning a chain of runs such as `{11, 111, 1111}` into a nonoverlapping
//! prefix chain by prepending a letter.
//!
//! Prepending does not preserve counts in general: `count(a·w, a·x)` counts
//! only the occurrences of `w` in `x` that start at the front of `x` or right
//! after an `a` (see [`anchored_count`]). For runs of `c` over a two-letter
//! alphabet the full count is recovered from the anchored counts of longer
//! runs: `count(c^j, x) = sum_{i >= j} count(a·c^i, a·x)`.

use super::chain::check_chain;
use crate::error::{Error, Result};
use crate::words::{count_occurrences, Alphabet, PartialWord, Sampling, Symbol};

/// Occurrences of `pw` in `text` at position 0 or right after `anchor`.
pub fn anchored_count(text: &[Symbol], pw: &PartialWord, anchor: Symbol) -> u64 {
    let m = pw.len();
    if text.len() < m {
        return 0;
    }
    (0..=text.len() - m)
        .filter(|&p| (p == 0 || text[p - 1] == anchor) && pw.matches_at(text, p))
        .count() as u64
}

/// The prefixed chain `{a·w_i}` plus what is needed to map counts back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReduction {
    anchor: Symbol,
    original: Vec<PartialWord>,
    chain: Vec<PartialWord>,
    /// `Some(c)` when every original word is a run of `c` over two letters.
    run_letter: Option<Symbol>,
}

/// Prepends `anchor` to every word and checks that the result is an
/// acceptable chain for the chain law.
pub fn prepend_reduction(
    alphabet: &Alphabet,
    words: &[PartialWord],
    anchor: Symbol,
) -> Result<ChainReduction> {
    if usize::from(anchor) >= alphabet.size() {
        return Err(Error::InvalidArgument(format!(
            "anchor index {anchor} out of range"
        )));
    }
    for w in words {
        alphabet.check_partial(w)?;
    }
    let chain: Vec<PartialWord> = words
        .iter()
        .map(|w| {
            let mut letters = vec![Some(anchor)];
            letters.extend_from_slice(w.letters());
            PartialWord::new(letters)
        })
        .collect::<Result<_>>()?;
    check_chain(&chain).map_err(|e| Error::ReductionNotApplicable(e.to_string()))?;
    let run_letter = match words
        .first()
        .and_then(|w| w.letters().first().copied().flatten())
    {
        Some(c)
            if alphabet.size() == 2
                && c != anchor
                && words
                    .iter()
                    .all(|w| w.letters().iter().all(|&x| x == Some(c))) =>
        {
            Some(c)
        }
        _ => None,
    };
    Ok(ChainReduction {
        anchor,
        original: words.to_vec(),
        chain,
        run_letter,
    })
}

impl ChainReduction {
    pub fn anchor(&self) -> Symbol {
        self.anchor
    }

    pub fn original(&self) -> &[PartialWord] {
        &self.original
    }

    pub fn chain(&self) -> &[PartialWord] {
        &self.chain
    }

    pub fn run_letter(&self) -> Option<Symbol> {
        self.run_letter
    }

    /// `a·x`.
    pub fn transform(&self, text: &[Symbol]) -> Vec<Symbol> {
        let mut out = Vec::with_capacity(text.len() + 1);
        out.push(self.anchor);
        out.extend_from_slice(text);
        out
    }

    /// Sliding counts of the prefixed chain in `a·x`; equal to the anchored
    /// counts of the original words in `x`.
    pub fn chain_counts(&self, text: &[Symbol]) -> Vec<u64> {
        let t = self.transform(text);
        self.chain
            .iter()
            .map(|w| count_occurrences(&t, w, Sampling::Sliding))
            .collect()
    }

    /// Runs `a·c^i` for `i` from the shortest original run length up to
    /// `max_len`. Their counts feed [`ChainReduction::lift_run_counts`].
    pub fn extended_chain(&self, max_len: usize) -> Result<Vec<PartialWord>> {
        let c = self.run_letter.ok_or_else(|| {
            Error::ReductionNotApplicable(
                "count lifting needs runs of one letter over two letters".into(),
            )
        })?;
        let shortest = self
            .original
            .iter()
            .map(PartialWord::len)
            .min()
            .unwrap_or(1);
        (shortest..=max_len.max(shortest))
            .map(|i| {
                let mut letters = vec![Some(self.anchor)];
                letters.extend(std::iter::repeat_n(Some(c), i));
                PartialWord::new(letters)
            })
            .collect()
    }

    /// Counts of the original runs from the counts of the extended chain,
    /// `count(c^j) = sum_{i >= j} count(a·c^i)`.
    pub fn lift_run_counts(&self, extended: &[u64]) -> Vec<u64> {
        let shortest = self
            .original
            .iter()
            .map(PartialWord::len)
            .min()
            .unwrap_or(1);
        self.original
            .iter()
            .map(|w| extended.iter().skip(w.len() - shortest).sum())
            .collect()
    }
}
