use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{rat_from_u64, to_decimal_string, to_f64};

/// Explicit bounds attached to a truncated distribution.
///
/// Every reported mass is within `point_error_bound` of the exact mass, the
/// per-point errors over all evaluated points sum to at most
/// `total_error_bound`, and the exact mass outside the evaluated support is
/// at most `support_tail_bound`. All are exact rationals so the claim can be
/// rechecked with [`ExactPmf::verify_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationCertificate {
    pub epsilon: BigRational,
    pub point_error_bound: BigRational,
    pub total_error_bound: BigRational,
    pub support_tail_bound: BigRational,
    /// Number of summed terms.
    pub terms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Precision {
    Exact,
    Truncated(TruncationCertificate),
}

/// A distribution over count vectors with exact rational masses.
///
/// Only vectors with nonzero mass are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPmf {
    arity: usize,
    masses: BTreeMap<Vec<u64>, BigRational>,
    precision: Precision,
}

impl ExactPmf {
    pub fn from_masses(
        arity: usize,
        masses: impl IntoIterator<Item = (Vec<u64>, BigRational)>,
        precision: Precision,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (counts, mass) in masses {
            debug_assert_eq!(counts.len(), arity);
            if !mass.is_zero() {
                *map.entry(counts).or_insert_with(BigRational::zero) += mass;
            }
        }
        map.retain(|_, m: &mut BigRational| !m.is_zero());
        ExactPmf {
            arity,
            masses: map,
            precision,
        }
    }

    /// All mass on the zero vector.
    pub fn point_mass_at_zero(arity: usize) -> Self {
        ExactPmf::from_masses(
            arity,
            [(vec![0; arity], BigRational::one())],
            Precision::Exact,
        )
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn precision(&self) -> &Precision {
        &self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision == Precision::Exact
    }

    pub fn certificate(&self) -> Option<&TruncationCertificate> {
        match &self.precision {
            Precision::Exact => None,
            Precision::Truncated(c) => Some(c),
        }
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn mass(&self, counts: &[u64]) -> BigRational {
        self.masses
            .get(counts)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u64>, &BigRational)> {
        self.masses.iter()
    }

    pub fn total(&self) -> BigRational {
        self.masses.values().sum()
    }

    /// Law of coordinate `i`.
    pub fn marginal(&self, i: usize) -> ExactPmf {
        let precision = match &self.precision {
            Precision::Exact => Precision::Exact,
            Precision::Truncated(c) => {
                let mut fibre: BTreeMap<u64, u64> = BTreeMap::new();
                for k in self.masses.keys() {
                    *fibre.entry(k[i]).or_default() += 1;
                }
                let widest = fibre.values().copied().max().unwrap_or(1);
                let point =
                    (&c.point_error_bound * rat_from_u64(widest)).min(c.total_error_bound.clone());
                Precision::Truncated(TruncationCertificate {
                    point_error_bound: point,
                    ..c.clone()
                })
            }
        };
        ExactPmf::from_masses(
            1,
            self.masses.iter().map(|(k, m)| (vec![k[i]], m.clone())),
            precision,
        )
    }

    /// Relabels count vectors, merging masses that land on the same label.
    pub fn map_counts(&self, arity: usize, f: impl Fn(&[u64]) -> Vec<u64>) -> ExactPmf {
        ExactPmf::from_masses(
            arity,
            self.masses.iter().map(|(k, m)| (f(k), m.clone())),
            self.precision.clone(),
        )
    }

    /// `sum_s s_i^t P(s)`.
    pub fn raw_moment(&self, i: usize, t: u32) -> BigRational {
        self.masses
            .iter()
            .map(|(k, m)| {
                BigRational::from_integer(num_traits::pow(BigInt::from(k[i]), t as usize)) * m
            })
            .sum()
    }

    pub fn mean(&self, i: usize) -> BigRational {
        self.raw_moment(i, 1)
    }

    pub fn variance(&self, i: usize) -> BigRational {
        let mean = self.mean(i);
        self.raw_moment(i, 2) - &mean * &mean
    }

    /// Cumulative distribution of a univariate law at its support points.
    pub fn cdf(&self) -> Result<Vec<(u64, BigRational)>> {
        if self.arity != 1 {
            return Err(Error::InvalidArgument(format!(
                "CDF needs a univariate law, arity is {}",
                self.arity
            )));
        }
        let mut acc = BigRational::zero();
        Ok(self
            .masses
            .iter()
            .map(|(k, m)| {
                acc += m;
                (k[0], acc.clone())
            })
            .collect())
    }

    /// Exact rational checks: masses are nonnegative, and either the total is
    /// exactly one or the certificate guarantees a total of at least `1 - epsilon`.
    pub fn verify_certificate(&self) -> bool {
        if self.masses.values().any(Signed::is_negative) {
            return false;
        }
        let total = self.total();
        match &self.precision {
            Precision::Exact => total.is_one(),
            Precision::Truncated(c) => {
                let one = BigRational::one();
                let guaranteed = &one - &c.support_tail_bound - &c.total_error_bound;
                guaranteed >= &one - &c.epsilon
                    && total >= guaranteed
                    && total <= &one + &c.total_error_bound
            }
        }
    }

    /// JSON-ready view with decimal strings of `digits` significant digits,
    /// and exact numerator/denominator strings when `fractions` is set.
    pub fn to_report(&self, digits: usize, fractions: bool) -> PmfReport {
        let certificate = self.certificate().map(|c| CertificateReport {
            epsilon: to_decimal_string(&c.epsilon, digits),
            point_error_bound: to_decimal_string(&c.point_error_bound, digits),
            total_error_bound: to_decimal_string(&c.total_error_bound, digits),
            support_tail_bound: to_decimal_string(&c.support_tail_bound, digits),
            terms: c.terms,
        });
        PmfReport {
            arity: self.arity,
            precision: if self.is_exact() {
                "exact"
            } else {
                "truncated"
            }
            .into(),
            certificate,
            entries: self
                .masses
                .iter()
                .map(|(k, m)| PmfEntry {
                    counts: k.clone(),
                    prob: to_decimal_string(m, digits),
                    prob_num: fractions.then(|| m.numer().to_string()),
                    prob_den: fractions.then(|| m.denom().to_string()),
                })
                .collect(),
        }
    }

    /// CSV with one column per count coordinate and a `prob` column.
    pub fn write_csv<W: Write>(&self, out: W, digits: usize) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = (1..=self.arity).map(|i| format!("count{i}")).collect();
        if self.arity == 1 {
            header = vec!["count".into()];
        }
        header.push("prob".into());
        w.write_record(&header)?;
        for (k, m) in &self.masses {
            let mut row: Vec<String> = k.iter().map(u64::to_string).collect();
            row.push(to_decimal_string(m, digits));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Univariate masses as `f64`, indexed by count from 0 to the largest support point.
    pub fn dense_f64(&self) -> Result<Vec<f64>> {
        if self.arity != 1 {
            return Err(Error::InvalidArgument(
                "dense view needs a univariate law".into(),
            ));
        }
        let max = self.masses.keys().map(|k| k[0]).max().unwrap_or(0) as usize;
        let mut out = vec![0.0; max + 1];
        for (k, m) in &self.masses {
            out[k[0] as usize] = to_f64(m);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PmfEntry {
    pub counts: Vec<u64>,
    pub prob: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prob_num: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prob_den: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub epsilon: String,
    pub point_error_bound: String,
    pub total_error_bound: String,
    pub support_tail_bound: String,
    pub terms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PmfReport {
    pub arity: usize,
    pub precision: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<CertificateReport>,
    pub entries: Vec<PmfEntry>,
}
