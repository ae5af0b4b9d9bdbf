use serde::{Deserialize, Serialize};

use super::ks::{ks_test, KsResult};
use crate::error::Result;
use crate::exact::{binomial_pmf, joint_pmf, DistOptions, ExactPmf, OccurrenceSpec};
use crate::model::IidModel;
use crate::numeric::to_f64;
use crate::oracles::{
    monte_carlo_pmf, sample_exact, EmpiricalPmf, MonteCarloConfig, RunMetadata, StreamMode,
};
use crate::rng::{BitExtraction, GeneratorKind};
use crate::words::PartialWord;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditConfig {
    pub generator: GeneratorKind,
    pub seed: u32,
    pub extraction: BitExtraction,
    pub stream: StreamMode,
    pub word: PartialWord,
    pub model: IidModel,
    pub n: u64,
    pub t: u64,
}

/// One count value with the exact, binomial and empirical probabilities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub count: u64,
    pub exact: f64,
    pub binomial: f64,
    pub empirical: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub word: String,
    pub run: RunMetadata,
    pub ks: KsResult,
    pub rows: Vec<AuditRow>,
}

impl AuditReport {
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Samples word counts from a generator, compares them with the exact law by
/// a Kolmogorov-Smirnov test, and tabulates the exact, binomial
/// `Binomial(n, P(w))` and empirical laws side by side.
pub fn rng_audit(cfg: &AuditConfig) -> Result<AuditReport> {
    let spec = OccurrenceSpec::single(cfg.word.clone(), cfg.n, cfg.model.clone())?;
    let law = joint_pmf(&spec, &DistOptions::default())?;
    let (emp, run) = match cfg.generator {
        GeneratorKind::ExactSampler => {
            let (emp, mut run) = sample_exact(&law, cfg.seed, cfg.t)?;
            run.n = Some(cfg.n);
            (emp, run)
        }
        kind => monte_carlo_pmf(
            &spec,
            &MonteCarloConfig {
                generator: kind,
                seed: cfg.seed,
                extraction: cfg.extraction,
                iterations: cfg.t,
                stream: cfg.stream,
            },
        )?,
    };
    let ks = ks_test(&emp.cdf(0)?, &law)?;
    Ok(AuditReport {
        word: cfg.model.alphabet().render_partial(&cfg.word),
        run,
        ks,
        rows: comparison_rows(&law, &emp, cfg.n, &cfg.model.prob(&cfg.word)),
    })
}

fn comparison_rows(
    law: &ExactPmf,
    emp: &EmpiricalPmf,
    n: u64,
    p: &num_rational::BigRational,
) -> Vec<AuditRow> {
    let top_law = law.iter().map(|(k, _)| k[0]).max().unwrap_or(0);
    let top_emp = emp.frequencies().keys().map(|k| k[0]).max().unwrap_or(0);
    (0..=top_law.max(top_emp))
        .map(|k| AuditRow {
            count: k,
            exact: to_f64(&law.mass(&[k])),
            binomial: to_f64(&binomial_pmf(n, p, k)),
            empirical: to_f64(&emp.mass(&[k])),
        })
        .collect()
}
