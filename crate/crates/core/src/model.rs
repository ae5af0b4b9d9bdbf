use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{parse_rational, rat_from_u64};
use crate::words::{Alphabet, PartialWord, Symbol, Word};

/// An i.i.d. letter model with exact rational letter probabilities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IidModel {
    alphabet: Alphabet,
    probs: Vec<BigRational>,
}

impl IidModel {
    pub fn new(alphabet: Alphabet, probs: Vec<BigRational>) -> Result<Self> {
        if probs.len() != alphabet.size() {
            return Err(Error::InvalidModel(format!(
                "{} probabilities for an alphabet of {} symbols",
                probs.len(),
                alphabet.size()
            )));
        }
        if probs.iter().any(Signed::is_negative) {
            return Err(Error::InvalidModel("negative letter probability".into()));
        }
        let total: BigRational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidModel(format!(
                "letter probabilities sum to {total}, not 1"
            )));
        }
        Ok(IidModel { alphabet, probs })
    }

    /// Uniform letters.
    pub fn uniform(alphabet: Alphabet) -> Self {
        let q = alphabet.size() as u64;
        let p = rat_from_u64(q).recip();
        IidModel {
            probs: vec![p; alphabet.size()],
            alphabet,
        }
    }

    pub fn fair_coin() -> Self {
        IidModel::uniform(Alphabet::binary())
    }

    /// Parses probabilities written as decimals or fractions (`"0.25"`, `"1/3"`).
    /// They must sum exactly to one.
    pub fn parse(alphabet: Alphabet, probs: &[&str]) -> Result<Self> {
        let probs = probs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        IidModel::new(alphabet, probs)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn letter_prob(&self, s: Symbol) -> &BigRational {
        &self.probs[usize::from(s)]
    }

    pub fn word_prob(&self, w: &Word) -> BigRational {
        w.letters()
            .iter()
            .map(|&s| self.letter_prob(s))
            .fold(BigRational::one(), |acc, p| acc * p)
    }

    /// Probability that the pattern matches at a fixed position. Wildcards
    /// contribute a factor 1, so this is the probability of the tilde word.
    pub fn prob(&self, pw: &PartialWord) -> BigRational {
        self.word_prob(&pw.tilde())
    }

    /// Probability of a concrete text.
    pub fn text_prob(&self, text: &[Symbol]) -> BigRational {
        text.iter()
            .map(|&s| self.letter_prob(s))
            .fold(BigRational::one(), |acc, p| acc * p)
    }

    pub fn is_uniform(&self) -> bool {
        self.probs.windows(2).all(|w| w[0] == w[1])
    }
}

/// Serialized form of a model: symbols plus exact probability strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub alphabet: Alphabet,
    pub probs: Vec<String>,
}

impl From<&IidModel> for ModelSpec {
    fn from(m: &IidModel) -> Self {
        ModelSpec {
            alphabet: m.alphabet.clone(),
            probs: m.probs.iter().map(ToString::to_string).collect(),
        }
    }
}

impl TryFrom<ModelSpec> for IidModel {
    type Error = Error;

    fn try_from(spec: ModelSpec) -> Result<Self> {
        let probs: Vec<&str> = spec.probs.iter().map(String::as_str).collect();
        IidModel::parse(spec.alphabet, &probs)
    }
}
