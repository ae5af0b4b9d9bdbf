use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::automaton::{CountAutomaton, DEFAULT_STATE_BUDGET};
use crate::error::{Error, Result};
use crate::exact::{ExactPmf, OccurrenceSpec, Precision};
use crate::numeric::ratio;
use crate::rng::{
    BitExtraction, BitSource, ExactSampler, GeneratorKind, GeneratorState, LetterSource,
    SymbolSource,
};
use crate::stats::EmpiricalCdf;
use crate::words::{count_occurrences, Sampling, Symbol};

/// Whether all samples come from one generator stream or each sample
/// reseeds with `seed + i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StreamMode {
    #[default]
    Continuous,
    Reseed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonteCarloConfig {
    pub generator: GeneratorKind,
    pub seed: u32,
    /// Used for binary fair-coin models; other models invert uniforms.
    pub extraction: BitExtraction,
    pub iterations: u64,
    pub stream: StreamMode,
}

/// What produced an empirical law, enough to reproduce it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub generator: String,
    pub seed: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub extraction: Option<BitExtraction>,
    pub stream: StreamMode,
    pub t: u64,
    /// Text length; absent for draws straight from a law.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u64>,
}

/// Sample counts of observed count vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EmpiricalPmf {
    arity: usize,
    counts: BTreeMap<Vec<u64>, u64>,
    t: u64,
}

impl EmpiricalPmf {
    pub fn new(arity: usize) -> Self {
        EmpiricalPmf {
            arity,
            counts: BTreeMap::new(),
            t: 0,
        }
    }

    pub fn record(&mut self, counts: &[u64]) {
        debug_assert_eq!(counts.len(), self.arity);
        *self.counts.entry(counts.to_vec()).or_default() += 1;
        self.t += 1;
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn samples(&self) -> u64 {
        self.t
    }

    pub fn frequencies(&self) -> &BTreeMap<Vec<u64>, u64> {
        &self.counts
    }

    /// Masses `count / t`, exactly.
    pub fn to_pmf(&self) -> ExactPmf {
        ExactPmf::from_masses(
            self.arity,
            self.counts
                .iter()
                .map(|(k, &c)| (k.clone(), ratio(c.into(), self.t.into()))),
            Precision::Exact,
        )
    }

    /// Empirical CDF of coordinate `i`.
    pub fn cdf(&self, i: usize) -> Result<EmpiricalCdf> {
        let mut marginal: BTreeMap<u64, u64> = BTreeMap::new();
        for (k, &c) in &self.counts {
            *marginal.entry(k[i]).or_default() += c;
        }
        EmpiricalCdf::from_frequencies(marginal)
    }

    pub fn mass(&self, counts: &[u64]) -> BigRational {
        ratio(
            self.counts.get(counts).copied().unwrap_or(0).into(),
            self.t.max(1).into(),
        )
    }
}

struct Counter {
    automaton: Option<CountAutomaton>,
    spec: OccurrenceSpec,
}

impl Counter {
    fn new(spec: &OccurrenceSpec) -> Result<Self> {
        let automaton = match spec.sampling() {
            Sampling::Sliding => Some(CountAutomaton::new(
                spec.words(),
                spec.model().alphabet().size(),
                DEFAULT_STATE_BUDGET,
            )?),
            Sampling::Blockwise => None,
        };
        Ok(Counter {
            automaton,
            spec: spec.clone(),
        })
    }

    fn count(&self, text: &[Symbol], out: &mut Vec<u64>) {
        out.clear();
        out.resize(self.spec.arity(), 0);
        match &self.automaton {
            Some(a) => a.count_into(text, out),
            None => {
                for (c, w) in out.iter_mut().zip(self.spec.words()) {
                    *c = count_occurrences(text, w, Sampling::Blockwise);
                }
            }
        }
    }
}

/// `t` samples of length `n` drawn from `source` back to back.
pub fn monte_carlo_from_source(
    spec: &OccurrenceSpec,
    source: &mut dyn SymbolSource,
    t: u64,
) -> Result<EmpiricalPmf> {
    if t == 0 {
        return Err(Error::InvalidArgument(
            "at least one iteration is required".into(),
        ));
    }
    let counter = Counter::new(spec)?;
    let mut text = vec![0 as Symbol; spec.n() as usize];
    let mut counts = Vec::new();
    let mut emp = EmpiricalPmf::new(spec.arity());
    for i in 0..t {
        source.fill(&mut text).map_err(|e| match e {
            Error::StreamExhausted(_) => Error::StreamExhausted(i * spec.n()),
            other => other,
        })?;
        counter.count(&text, &mut counts);
        emp.record(&counts);
    }
    Ok(emp)
}

fn make_source(
    spec: &OccurrenceSpec,
    cfg: &MonteCarloConfig,
    seed: u32,
) -> Result<(Box<dyn SymbolSource>, bool)> {
    let generator = GeneratorState::new(cfg.generator, seed)?;
    let model = spec.model();
    if model.alphabet().size() == 2 && model.is_uniform() {
        Ok((Box::new(BitSource::new(generator, cfg.extraction)), true))
    } else {
        Ok((Box::new(LetterSource::new(generator, model)), false))
    }
}

/// Monte Carlo law of the counts with one of the built-in generators.
pub fn monte_carlo_pmf(
    spec: &OccurrenceSpec,
    cfg: &MonteCarloConfig,
) -> Result<(EmpiricalPmf, RunMetadata)> {
    if cfg.generator == GeneratorKind::ExactSampler {
        return Err(Error::InvalidArgument(
            "the exact sampler needs a computed law; use sample_exact".into(),
        ));
    }
    let (emp, bits) = match cfg.stream {
        StreamMode::Continuous => {
            let (mut source, bits) = make_source(spec, cfg, cfg.seed)?;
            (
                monte_carlo_from_source(spec, source.as_mut(), cfg.iterations)?,
                bits,
            )
        }
        StreamMode::Reseed => {
            if cfg.iterations == 0 {
                return Err(Error::InvalidArgument(
                    "at least one iteration is required".into(),
                ));
            }
            let counter = Counter::new(spec)?;
            let mut text = vec![0 as Symbol; spec.n() as usize];
            let mut counts = Vec::new();
            let mut emp = EmpiricalPmf::new(spec.arity());
            let mut bits = false;
            for i in 0..cfg.iterations {
                let (mut source, b) = make_source(spec, cfg, cfg.seed.wrapping_add(i as u32))?;
                bits = b;
                source.fill(&mut text)?;
                counter.count(&text, &mut counts);
                emp.record(&counts);
            }
            (emp, bits)
        }
    };
    let meta = RunMetadata {
        generator: cfg.generator.name().into(),
        seed: cfg.seed,
        extraction: bits.then_some(cfg.extraction),
        stream: cfg.stream,
        t: cfg.iterations,
        n: Some(spec.n()),
    };
    Ok((emp, meta))
}

/// `t` draws straight from `law` with the inverse-CDF sampler.
pub fn sample_exact(law: &ExactPmf, seed: u32, t: u64) -> Result<(EmpiricalPmf, RunMetadata)> {
    let mut sampler = ExactSampler::new(law, seed)?;
    let mut emp = EmpiricalPmf::new(law.arity());
    for _ in 0..t {
        emp.record(sampler.sample());
    }
    let meta = RunMetadata {
        generator: GeneratorKind::ExactSampler.name().into(),
        seed,
        extraction: None,
        stream: StreamMode::Continuous,
        t,
        n: None,
    };
    Ok((emp, meta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::IidModel;
    use crate::numeric::rat;
    use crate::rng::BufferSource;
    use crate::words::Alphabet;

    fn spec(w: &str, n: u64) -> OccurrenceSpec {
        OccurrenceSpec::single(
            Alphabet::binary().partial(w).unwrap(),
            n,
            IidModel::fair_coin(),
        )
        .unwrap()
    }

    #[test]
    fn empirical_mass_sums_to_one() {
        let cfg = MonteCarloConfig {
            generator: GeneratorKind::Mt19937,
            seed: 5489,
            extraction: BitExtraction::Lsb,
            iterations: 1000,
            stream: StreamMode::Continuous,
        };
        let (emp, meta) = monte_carlo_pmf(&spec("10", 20), &cfg).unwrap();
        assert_eq!(emp.samples(), 1000);
        assert_eq!(emp.to_pmf().total(), rat(1, 1));
        assert_eq!(meta.generator, "mt19937");
        assert_eq!(meta.extraction, Some(BitExtraction::Lsb));
    }

    #[test]
    fn deterministic_given_seed() {
        for stream in [StreamMode::Continuous, StreamMode::Reseed] {
            let cfg = MonteCarloConfig {
                generator: GeneratorKind::BsdRandom,
                seed: 3,
                extraction: BitExtraction::Lsb,
                iterations: 200,
                stream,
            };
            let a = monte_carlo_pmf(&spec("110", 50), &cfg).unwrap();
            let b = monte_carlo_pmf(&spec("110", 50), &cfg).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn buffer_source_runs_dry() {
        let mut src = BufferSource::new(vec![0, 1, 1, 0, 1]);
        let err = monte_carlo_from_source(&spec("01", 2), &mut src, 3).unwrap_err();
        assert_eq!(err.kind(), "stream_exhausted");
        let mut src = BufferSource::new(vec![0, 1, 1, 0]);
        let emp = monte_carlo_from_source(&spec("01", 2), &mut src, 2).unwrap();
        assert_eq!(emp.mass(&[1]), rat(1, 2));
    }
}
