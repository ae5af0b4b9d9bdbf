//! Reference laws used for comparison: binomial, Poisson, block-wise counts.

use num_rational::BigRational;
use num_traits::{One, Zero};
use statrs::distribution::{Discrete, Poisson};

use super::combin::{binomial, multinomial};
use super::pmf::{ExactPmf, Precision};
use super::OccurrenceSpec;
use crate::error::{Error, Result};
use crate::model::IidModel;
use crate::numeric::{is_probability, rat_pow, uint_to_int};
use crate::words::PartialWord;

/// `C(n, k) p^k (1 - p)^(n - k)`, exactly.
pub fn binomial_pmf(n: u64, p: &BigRational, k: u64) -> BigRational {
    if k > n {
        return BigRational::zero();
    }
    let q = BigRational::one() - p;
    BigRational::from_integer(uint_to_int(binomial(n, k))) * rat_pow(p, k) * rat_pow(&q, n - k)
}

/// The whole Binomial(n, p) law.
pub fn binomial_law(n: u64, p: &BigRational) -> Result<ExactPmf> {
    if !is_probability(p) {
        return Err(Error::InvalidArgument(format!("{p} is not a probability")));
    }
    Ok(ExactPmf::from_masses(
        1,
        (0..=n).map(|k| (vec![k], binomial_pmf(n, p, k))),
        Precision::Exact,
    ))
}

/// `e^-lambda lambda^k / k!` in double precision.
pub fn poisson_pmf(lambda: f64, k: u64) -> Result<f64> {
    if lambda == 0.0 {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    let d = Poisson::new(lambda)
        .map_err(|e| Error::InvalidArgument(format!("poisson rate {lambda}: {e}")))?;
    Ok(d.pmf(k))
}

/// Block-wise count of one pattern: Binomial(floor(n / m), P(w)).
pub fn blockwise_pmf(w: &PartialWord, n: u64, model: &IidModel) -> Result<ExactPmf> {
    model.alphabet().check_partial(w)?;
    binomial_law(n / w.len() as u64, &model.prob(w))
}

/// Joint block-wise law. Patterns must share a length; each aligned block
/// then matches at most one of them, so the counts are multinomial.
pub(crate) fn blockwise_joint(spec: &OccurrenceSpec, budget: u64) -> Result<ExactPmf> {
    let lengths = spec.lengths();
    let m = lengths[0];
    if lengths.iter().any(|&x| x != m) {
        return Err(Error::InvalidArgument(
            "block-wise counts need patterns of a common length".into(),
        ));
    }
    let words = spec.words();
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            let shared = words[i]
                .letters()
                .iter()
                .zip(words[j].letters())
                .all(|(a, b)| a.is_none() || b.is_none() || a == b);
            if shared {
                return Err(Error::Overlapping(format!(
                    "patterns {} and {} can match the same block",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let blocks = spec.n() / m;
    let probs = spec.probs();
    if spec.arity() == 1 {
        return binomial_law(blocks, &probs[0]);
    }
    let rest = BigRational::one() - probs.iter().sum::<BigRational>();
    let l = spec.arity();
    let estimate = (blocks as f64 + 1.0).powi(l as i32);
    if estimate > budget as f64 {
        return Err(Error::BudgetExceeded(format!(
            "block-wise law needs about {estimate:.3e} points, over the budget of {budget}"
        )));
    }
    let mut masses = Vec::new();
    let mut s = vec![0u64; l];
    loop {
        let used: u64 = s.iter().sum();
        if used <= blocks {
            let mut mass = BigRational::from_integer(uint_to_int(multinomial(blocks, &s)));
            for (p, &k) in probs.iter().zip(&s) {
                mass *= rat_pow(p, k);
            }
            mass *= rat_pow(&rest, blocks - used);
            masses.push((s.clone(), mass));
        }
        // odometer
        let mut i = l;
        loop {
            if i == 0 {
                return Ok(ExactPmf::from_masses(l, masses, Precision::Exact));
            }
            i -= 1;
            if s[i] < blocks {
                s[i] += 1;
                break;
            }
            s[i] = 0;
        }
    }
}
