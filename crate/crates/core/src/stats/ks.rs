use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ExactPmf;
use crate::numeric::{ratio, to_f64};

/// Step CDF of a sample of nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalCdf {
    values: Vec<u64>,
    cumulative: Vec<u64>,
    t: u64,
}

impl EmpiricalCdf {
    pub fn from_frequencies(freq: BTreeMap<u64, u64>) -> Result<Self> {
        let mut values = Vec::with_capacity(freq.len());
        let mut cumulative = Vec::with_capacity(freq.len());
        let mut t = 0u64;
        for (v, c) in freq {
            if c == 0 {
                continue;
            }
            t += c;
            values.push(v);
            cumulative.push(t);
        }
        if t == 0 {
            return Err(Error::EmptySample);
        }
        Ok(EmpiricalCdf {
            values,
            cumulative,
            t,
        })
    }

    pub fn from_samples(samples: &[u64]) -> Result<Self> {
        let mut freq = BTreeMap::new();
        for &s in samples {
            *freq.entry(s).or_insert(0) += 1;
        }
        EmpiricalCdf::from_frequencies(freq)
    }

    pub fn samples(&self) -> u64 {
        self.t
    }

    /// Support values with their cumulative fractions.
    pub fn steps(&self) -> impl Iterator<Item = (u64, BigRational)> + '_ {
        self.values
            .iter()
            .zip(&self.cumulative)
            .map(|(&v, &c)| (v, ratio(c.into(), self.t.into())))
    }

    /// `F_t(x)`.
    pub fn at(&self, x: u64) -> BigRational {
        let i = self.values.partition_point(|&v| v <= x);
        if i == 0 {
            BigRational::zero()
        } else {
            ratio(self.cumulative[i - 1].into(), self.t.into())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub d: f64,
    pub t: u64,
    pub p_value: f64,
}

/// `sup_x |F_t(x) - F(x)|`, exact. Both CDFs are right-continuous steps on
/// the integers, so the supremum is attained at a jump of one of them, and
/// left limits at a jump equal the value at the previous jump.
pub fn ks_statistic(empirical: &EmpiricalCdf, exact: &ExactPmf) -> Result<BigRational> {
    if exact.arity() != 1 {
        return Err(Error::InvalidArgument(
            "the reference law must be univariate".into(),
        ));
    }
    if empirical.t == 0 {
        return Err(Error::EmptySample);
    }
    let mut jumps: Vec<u64> = exact.iter().map(|(k, _)| k[0]).collect();
    jumps.extend(&empirical.values);
    jumps.sort_unstable();
    jumps.dedup();
    let mut reference = BigRational::zero();
    let mut d = BigRational::zero();
    for x in jumps {
        reference += exact.mass(&[x]);
        let gap = (empirical.at(x) - &reference).abs();
        if gap > d {
            d = gap;
        }
    }
    Ok(d)
}

/// Asymptotic Kolmogorov tail `P(K > sqrt(t) d)`. Small arguments use the
/// theta-function form, which converges fast there; large ones use the
/// alternating series. Values below `1e-300` are reported as 0.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn ks_pvalue(d: f64, t: u64) -> f64 {
    let lambda = (t as f64).sqrt() * d;
    // also catches NaN
    if !(lambda > 0.0) {
        return 1.0;
    }
    let p = if lambda < 1.18 {
        let c = -std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let mut s = 0.0;
        for k in 1..=100u32 {
            let j = f64::from(2 * k - 1);
            let term = (c * j * j).exp();
            s += term;
            if term < 1e-17 * s {
                break;
            }
        }
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s
    } else {
        let mut s = 0.0;
        for k in 1..=100u32 {
            let kf = f64::from(k);
            let term = (-2.0 * kf * kf * lambda * lambda).exp();
            s += if k % 2 == 1 { term } else { -term };
            if term <= 1e-17 * s.abs() || term == 0.0 {
                break;
            }
        }
        2.0 * s
    };
    let p = p.clamp(0.0, 1.0);
    if p < 1e-300 {
        0.0
    } else {
        p
    }
}

pub fn ks_test(empirical: &EmpiricalCdf, exact: &ExactPmf) -> Result<KsResult> {
    let d = to_f64(&ks_statistic(empirical, exact)?);
    Ok(KsResult {
        d,
        t: empirical.t,
        p_value: ks_pvalue(d, empirical.t),
    })
}
