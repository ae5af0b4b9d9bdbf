//! Exact occurrence statistics of nonoverlapping words and partial words in
//! i.i.d. strings, with oracles, goodness-of-fit machinery and reference
//! generators for randomness audits.

pub mod error;
pub mod exact;
pub mod model;
pub mod numeric;
pub mod oracles;
pub mod rng;
pub mod stats;
pub mod words;

pub use error::{Error, Result};
pub use exact::{ExactPmf, OccurrenceSpec};
pub use model::IidModel;
pub use words::{Alphabet, PartialWord, Sampling, Word};

#[doc = include_str!("../../../README.md")]
#[cfg(doctest)]
pub struct ReadmeDoctests;
