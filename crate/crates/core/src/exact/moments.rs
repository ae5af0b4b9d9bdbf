use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use super::combin::{allocation_count, surjection_count};
use crate::error::{Error, Result};
use crate::model::IidModel;
use crate::numeric::{rat_from_u64, rat_pow, uint_to_int};
use crate::words::PartialWord;

/// Ingredients of the `t`-th raw moment of a single-word count:
/// `E[N^t] = sum_{s=1}^{min(T, t)} A_{t,s} C(n - s m + s, s) P^s`
/// where `A_{t,s}` counts surjections and `T = floor(n / m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentPlan {
    t: u32,
    truncation: u64,
    surjections: Vec<BigUint>,
}

impl MomentPlan {
    pub fn new(t: u32, n: u64, m: u64) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidArgument(
                "moment order must be at least 1".into(),
            ));
        }
        if m == 0 {
            return Err(Error::InvalidArgument(
                "word length must be positive".into(),
            ));
        }
        Ok(MomentPlan {
            t,
            truncation: n / m,
            surjections: (0..=t).map(|s| surjection_count(t, s)).collect(),
        })
    }

    pub fn order(&self) -> u32 {
        self.t
    }

    /// Largest number of disjoint copies that fit.
    pub fn truncation(&self) -> u64 {
        self.truncation
    }

    /// `A_{t,s}` for `s = 0..=t`.
    pub fn surjections(&self) -> &[BigUint] {
        &self.surjections
    }

    pub fn evaluate(&self, n: u64, m: u64, p: &BigRational) -> BigRational {
        let top = u64::from(self.t).min(self.truncation);
        (1..=top)
            .map(|s| {
                let weight = &self.surjections[s as usize] * allocation_count(n, m, s);
                BigRational::from_integer(uint_to_int(weight)) * rat_pow(p, s)
            })
            .sum()
    }
}

fn check_word(w: &PartialWord) -> Result<()> {
    if w.is_nonoverlapping() {
        Ok(())
    } else {
        Err(Error::Overlapping(
            "moment formulas need a nonoverlapping word".into(),
        ))
    }
}

/// `E[N_w^t]` for sliding counts in a sample of length `n`.
pub fn moment(w: &PartialWord, n: u64, model: &IidModel, t: u32) -> Result<BigRational> {
    check_word(w)?;
    model.alphabet().check_partial(w)?;
    let plan = MomentPlan::new(t, n, w.len() as u64)?;
    Ok(plan.evaluate(n, w.len() as u64, &model.prob(w)))
}

/// Mean `(n - m + 1) P` and variance `mean + 2 C(n - 2m + 2, 2) P^2 - mean^2`.
///
/// The pair term is the number of disjoint placements of two copies, so it
/// vanishes when two copies do not fit.
pub fn mean_variance(
    w: &PartialWord,
    n: u64,
    model: &IidModel,
) -> Result<(BigRational, BigRational)> {
    check_word(w)?;
    model.alphabet().check_partial(w)?;
    let m = w.len() as u64;
    let p = model.prob(w);
    if n < m {
        return Ok((BigRational::zero(), BigRational::zero()));
    }
    let mean = rat_from_u64(n - m + 1) * &p;
    let pairs = BigRational::from_integer(uint_to_int(allocation_count(n, m, 2) * 2u32));
    let variance = &mean + pairs * &p * &p - &mean * &mean;
    Ok((mean, variance))
}
