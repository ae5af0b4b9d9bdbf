//! Exact occurrence distributions for nonoverlapping (partial) words.
//!
//! For a nonoverlapping set of patterns the count `A(k)` of allocations of
//! `k_i` disjoint copies of each pattern, weighted by probability, is the
//! binomial moment `E[prod_i C(N_i, k_i)]`. Its generating function is the
//! generating function of the joint law shifted by one in every variable, so
//! the law is recovered by shifting back.

mod chain;
mod combin;
mod genpoly;
mod joint;
mod moments;
mod pmf;
mod reduction;
mod reference;
mod truncated;

pub use chain::{chain_exclusive_pmf, chain_pmf, check_chain, DEFAULT_POLY_BUDGET};
pub use combin::{allocation_count, binomial, multinomial, surjection_count};
pub use genpoly::GenPoly;
pub use joint::{allocation_weight, joint_mass, joint_pmf};
pub use moments::{mean_variance, moment, MomentPlan};
pub use pmf::{CertificateReport, ExactPmf, PmfEntry, PmfReport, Precision, TruncationCertificate};
pub use reduction::{anchored_count, prepend_reduction, ChainReduction};
pub use reference::{binomial_law, binomial_pmf, blockwise_pmf, poisson_pmf};

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::model::IidModel;
use crate::numeric::rat;
use crate::words::{is_partial_set_nonoverlapping, PartialWord, Sampling};

/// Default cap on the number of `(s, k)` term pairs in an exact evaluation.
pub const DEFAULT_TERM_BUDGET: u64 = 100_000_000;

/// The query object: which patterns, how long a sample, which letter model,
/// and how occurrences are counted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccurrenceSpec {
    words: Vec<PartialWord>,
    n: u64,
    model: IidModel,
    sampling: Sampling,
}

impl OccurrenceSpec {
    pub fn new(
        words: Vec<PartialWord>,
        n: u64,
        model: IidModel,
        sampling: Sampling,
    ) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one word is required".into(),
            ));
        }
        for w in &words {
            model.alphabet().check_partial(w)?;
        }
        Ok(OccurrenceSpec {
            words,
            n,
            model,
            sampling,
        })
    }

    /// One pattern, sliding counts.
    pub fn single(word: PartialWord, n: u64, model: IidModel) -> Result<Self> {
        OccurrenceSpec::new(vec![word], n, model, Sampling::Sliding)
    }

    pub fn words(&self) -> &[PartialWord] {
        &self.words
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn model(&self) -> &IidModel {
        &self.model
    }

    pub fn sampling(&self) -> Sampling {
        self.sampling
    }

    pub fn arity(&self) -> usize {
        self.words.len()
    }

    pub fn lengths(&self) -> Vec<u64> {
        self.words.iter().map(|w| w.len() as u64).collect()
    }

    pub fn probs(&self) -> Vec<BigRational> {
        self.words.iter().map(|w| self.model.prob(w)).collect()
    }

    pub fn with_n(&self, n: u64) -> Self {
        OccurrenceSpec { n, ..self.clone() }
    }

    /// The explicit formula requires a nonoverlapping pattern set.
    pub fn check_nonoverlapping(&self) -> Result<()> {
        if is_partial_set_nonoverlapping(&self.words) {
            Ok(())
        } else {
            let a = self.model.alphabet();
            let names: Vec<String> = self.words.iter().map(|w| a.render_partial(w)).collect();
            Err(Error::Overlapping(format!(
                "the pattern set {{{}}} is not nonoverlapping; use the automaton oracle instead",
                names.join(", ")
            )))
        }
    }
}

/// How the inclusion-exclusion sums are evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArithmeticMode {
    /// Every term, exact rational result.
    Exact,
    /// Stop each alternating sum once a certified remainder bound is below
    /// a share of `epsilon`; the support is cut where the binomial-moment
    /// bound on the remaining tail is below `epsilon / 2`.
    Truncated { epsilon: BigRational },
}

impl ArithmeticMode {
    /// Truncated mode with the default `epsilon = 1e-30`.
    pub fn truncated_default() -> Self {
        ArithmeticMode::Truncated {
            epsilon: default_epsilon(),
        }
    }
}

pub fn default_epsilon() -> BigRational {
    rat(1, 1) / num_traits::pow(rat(10, 1), 30)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistOptions {
    pub mode: ArithmeticMode,
    pub term_budget: u64,
}

impl Default for DistOptions {
    fn default() -> Self {
        DistOptions {
            mode: ArithmeticMode::Exact,
            term_budget: DEFAULT_TERM_BUDGET,
        }
    }
}

impl DistOptions {
    pub fn truncated(epsilon: BigRational) -> Self {
        DistOptions {
            mode: ArithmeticMode::Truncated { epsilon },
            ..Default::default()
        }
    }
}
