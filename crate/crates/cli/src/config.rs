use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use wordstat::numeric::parse_rational;
use wordstat::words::{Alphabet, PartialWord};
use wordstat::IidModel;

use crate::CliError;

/// Everything that determines a run. Written into every output file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    /// Command line without the program name and without `--out`; `rerun`
    /// replays it.
    pub args: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alphabet: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub probs: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub words: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub extraction: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub extra: BTreeMap<String, Value>,
}

impl RunConfig {
    pub fn new(command: &str, args: Vec<String>) -> Self {
        RunConfig {
            command: command.into(),
            args,
            ..RunConfig::default()
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.extra.insert(
            key.into(),
            serde_json::to_value(value).unwrap_or(Value::Null),
        );
    }

    pub fn record_model(&mut self, model: &IidModel) {
        self.alphabet = Some(model.alphabet().symbols().iter().collect());
        self.probs = Some(model.probs().iter().map(ToString::to_string).collect());
    }
}

/// Integer count that may be written in decimal or scientific form, such as `3.2e9`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    if !r.is_integer() {
        return Err(format!("{s:?} is not an integer"));
    }
    r.to_integer()
        .to_string()
        .parse()
        .map_err(|_| format!("{s:?} is not a count in 0..2^64"))
}

/// Builds the model; no `--probs` means the uniform model.
pub fn build_model(alphabet: &str, probs: Option<&[String]>) -> Result<IidModel, CliError> {
    let alphabet = Alphabet::parse(alphabet)?;
    match probs {
        None => Ok(IidModel::uniform(alphabet)),
        Some(p) => {
            let p: Vec<&str> = p.iter().map(String::as_str).collect();
            Ok(IidModel::parse(alphabet, &p)?)
        }
    }
}

pub fn parse_words(model: &IidModel, words: &[String]) -> Result<Vec<PartialWord>, CliError> {
    if words.is_empty() {
        return Err(CliError::new(
            "invalid_argument",
            "at least one word (-w) is required",
        ));
    }
    words
        .iter()
        .map(|w| model.alphabet().partial(w).map_err(CliError::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_accept_scientific_notation() {
        assert_eq!(parse_count("3.2e9"), Ok(3_200_000_000));
        assert_eq!(parse_count("1600"), Ok(1600));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
    }

    #[test]
    fn uniform_model_by_default() {
        let m = build_model("ACGT", None).unwrap();
        assert!(m.is_uniform());
        assert!(build_model("01", Some(&["0.3".into(), "0.3".into()])).is_err());
    }
}
