use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::words::{PartialWord, Symbol};

/// Default cap on automaton states.
pub const DEFAULT_STATE_BUDGET: usize = 1 << 20;

/// Deterministic multi-pattern matcher that reports, per input letter, which
/// patterns end at the current position.
///
/// A state records, for every pattern, the set of its prefix lengths that
/// match a suffix of the input read so far (one bit per length). Wildcards
/// are folded into the per-letter compatibility masks, so realizations are
/// never expanded. Only states reachable from the empty state are built.
#[derive(Clone, Debug)]
pub struct CountAutomaton {
    q: usize,
    arity: usize,
    next: Vec<u32>,
    /// Pattern indices completed by each transition.
    emits: Vec<Vec<u32>>,
}

struct Layout {
    /// First word and word count of each pattern's bitset.
    spans: Vec<(usize, usize)>,
    lengths: Vec<usize>,
    /// `compat[a][word]`: bit `j` set iff pattern letter `j` accepts `a`.
    compat: Vec<Vec<u64>>,
    words: usize,
}

impl Layout {
    fn new(patterns: &[PartialWord], q: usize) -> Self {
        let mut spans = Vec::new();
        let mut words = 0;
        for p in patterns {
            let w = p.len().div_ceil(64);
            spans.push((words, w));
            words += w;
        }
        let mut compat = vec![vec![0u64; words]; q];
        for (a, row) in compat.iter_mut().enumerate() {
            for (p, &(start, _)) in patterns.iter().zip(&spans) {
                for (j, l) in p.letters().iter().enumerate() {
                    if l.is_none_or(|s| usize::from(s) == a) {
                        row[start + j / 64] |= 1 << (j % 64);
                    }
                }
            }
        }
        Layout {
            spans,
            lengths: patterns.iter().map(PartialWord::len).collect(),
            compat,
            words,
        }
    }

    /// `new = ((mask << 1) | 1) & compat[a]`, per pattern; returns completions.
    fn step(&self, state: &[u64], a: usize, out: &mut Vec<u64>) -> Vec<u32> {
        out.clear();
        out.resize(self.words, 0);
        let mut done = Vec::new();
        for (i, &(start, count)) in self.spans.iter().enumerate() {
            let mut carry = 1u64;
            for w in 0..count {
                let cur = state[start + w];
                out[start + w] = ((cur << 1) | carry) & self.compat[a][start + w];
                carry = cur >> 63;
            }
            let m = self.lengths[i];
            let last = m - 1;
            if out[start + last / 64] >> (last % 64) & 1 == 1 {
                done.push(i as u32);
            }
            // forget the completed full-length match; it cannot extend
            out[start + last / 64] &= !(1u64 << (last % 64));
        }
        done
    }
}

impl CountAutomaton {
    pub fn new(patterns: &[PartialWord], q: usize, state_budget: usize) -> Result<Self> {
        if patterns.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one pattern is required".into(),
            ));
        }
        for p in patterns {
            if p.letters().iter().flatten().any(|&s| usize::from(s) >= q) {
                return Err(Error::InvalidArgument(
                    "pattern letter outside the alphabet".into(),
                ));
            }
        }
        let layout = Layout::new(patterns, q);
        let mut ids: HashMap<Vec<u64>, u32> = HashMap::new();
        let mut states: Vec<Vec<u64>> = vec![vec![0; layout.words]];
        ids.insert(states[0].clone(), 0);
        let mut next = Vec::new();
        let mut emits = Vec::new();
        let mut buf = Vec::new();
        let mut i = 0;
        while i < states.len() {
            for a in 0..q {
                let done = layout.step(&states[i], a, &mut buf);
                let id = match ids.get(&buf) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= state_budget {
                            return Err(Error::BudgetExceeded(format!(
                                "automaton exceeds {state_budget} states"
                            )));
                        }
                        let id = states.len() as u32;
                        ids.insert(buf.clone(), id);
                        states.push(buf.clone());
                        id
                    }
                };
                next.push(id);
                emits.push(done);
            }
            i += 1;
        }
        Ok(CountAutomaton {
            q,
            arity: patterns.len(),
            next,
            emits,
        })
    }

    pub fn num_states(&self) -> usize {
        self.next.len() / self.q
    }

    pub fn alphabet_size(&self) -> usize {
        self.q
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub const fn start(&self) -> u32 {
        0
    }

    /// Next state and the patterns completed by reading `a`.
    #[inline]
    pub fn step(&self, state: u32, a: Symbol) -> (u32, &[u32]) {
        let idx = state as usize * self.q + usize::from(a);
        (self.next[idx], &self.emits[idx])
    }

    /// Sliding counts of every pattern in `text`.
    pub fn count(&self, text: &[Symbol]) -> Vec<u64> {
        let mut counts = vec![0; self.arity];
        self.count_into(text, &mut counts);
        counts
    }

    /// Adds the sliding counts of `text` to `counts`.
    #[inline]
    pub fn count_into(&self, text: &[Symbol], counts: &mut [u64]) {
        let mut s = self.start();
        for &a in text {
            let idx = s as usize * self.q + usize::from(a);
            for &i in &self.emits[idx] {
                counts[i as usize] += 1;
            }
            s = self.next[idx];
        }
    }
}
