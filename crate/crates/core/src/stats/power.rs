use serde::{Deserialize, Serialize};

use super::normal::normal_cdf;
use crate::error::{Error, Result};

/// Default number of null standard deviations below the null mean at which
/// the count test rejects.
pub const DEFAULT_SIGMA: f64 = 5.0;

/// One-sided count test: reject when `N < E - sigma * sqrt(V)` under the
/// null word probability `theta_star`. Powers use the normal approximation
/// without continuity correction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSpec {
    pub theta_star: f64,
    pub n: u64,
    pub word_len: u64,
    pub sigma: f64,
}

impl PowerSpec {
    pub fn new(theta_star: f64, n: u64, word_len: u64) -> Result<Self> {
        if !(theta_star > 0.0 && theta_star < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "null probability must lie in (0, 1), got {theta_star}"
            )));
        }
        if word_len == 0 || n < word_len {
            return Err(Error::InvalidArgument(format!(
                "need 1 <= word length <= n, got {word_len} and {n}"
            )));
        }
        let spec = PowerSpec {
            theta_star,
            n,
            word_len,
            sigma: DEFAULT_SIGMA,
        };
        // the closed-form variance can go negative for probabilities no
        // nonoverlapping word of this length can have
        if spec.sliding_moments(theta_star).1 <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "null probability {theta_star} gives a nonpositive count variance at n = {n}, m = {word_len}"
            )));
        }
        Ok(spec)
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    /// Sliding-count mean and variance for word probability `theta`.
    pub fn sliding_moments(&self, theta: f64) -> (f64, f64) {
        let n = self.n as f64;
        let m = self.word_len as f64;
        let mean = (n - m + 1.0) * theta;
        let pairs = if self.n >= 2 * self.word_len {
            (n - 2.0 * m + 2.0) * (n - 2.0 * m + 1.0)
        } else {
            0.0
        };
        (mean, mean + pairs * theta * theta - mean * mean)
    }

    /// Block-wise mean and variance: Binomial over `floor(n / m)` blocks.
    pub fn blockwise_moments(&self, theta: f64) -> (f64, f64) {
        let blocks = (self.n / self.word_len) as f64;
        (blocks * theta, blocks * theta * (1.0 - theta))
    }

    fn check_theta(&self, theta: f64) -> Result<()> {
        if theta > 0.0 && theta <= self.theta_star {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "alternative {theta} must lie in (0, {}]",
                self.theta_star
            )))
        }
    }
}

fn rejection_probability(threshold: f64, mean: f64, variance: f64) -> f64 {
    if variance <= 0.0 {
        return if mean < threshold { 1.0 } else { 0.0 };
    }
    normal_cdf((threshold - mean) / variance.sqrt())
}

pub fn sliding_power(spec: &PowerSpec, theta: f64) -> Result<f64> {
    spec.check_theta(theta)?;
    let (e0, v0) = spec.sliding_moments(spec.theta_star);
    let threshold = e0 - spec.sigma * v0.sqrt();
    let (e, v) = spec.sliding_moments(theta);
    Ok(rejection_probability(threshold, e, v))
}

pub fn blockwise_power(spec: &PowerSpec, theta: f64) -> Result<f64> {
    spec.check_theta(theta)?;
    let (e0, v0) = spec.blockwise_moments(spec.theta_star);
    let threshold = e0 - spec.sigma * v0.sqrt();
    let (e, v) = spec.blockwise_moments(theta);
    Ok(rejection_probability(threshold, e, v))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerPoint {
    pub theta: f64,
    pub power_sliding: f64,
    pub power_blockwise: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerCurve {
    pub spec: PowerSpec,
    pub points: Vec<PowerPoint>,
}

impl PowerCurve {
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for p in &self.points {
            w.serialize(p)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn power_curve(spec: &PowerSpec, grid: &[f64]) -> Result<PowerCurve> {
    let points = grid
        .iter()
        .map(|&theta| {
            Ok(PowerPoint {
                theta,
                power_sliding: sliding_power(spec, theta)?,
                power_blockwise: blockwise_power(spec, theta)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(PowerCurve {
        spec: spec.clone(),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_moments() {
        let s = PowerSpec::new(0.25, 500, 2).unwrap();
        let (e, v) = s.sliding_moments(0.25);
        assert_eq!(e, 124.75);
        assert!((v - 31.3125).abs() < 1e-9);
    }

    #[test]
    fn at_the_null_both_tests_reject_rarely() {
        let s = PowerSpec::new(0.25, 500, 2).unwrap();
        let phi5 = 2.866_515_718_791_939e-7;
        assert!((sliding_power(&s, 0.25).unwrap() - phi5).abs() < 1e-15);
        assert!((blockwise_power(&s, 0.25).unwrap() - phi5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(PowerSpec::new(1.5, 500, 2).is_err());
        let s = PowerSpec::new(0.25, 500, 2).unwrap();
        assert!(sliding_power(&s, 0.3).is_err());
        assert!(blockwise_power(&s, 0.0).is_err());
    }

    #[test]
    fn csv_columns() {
        let s = PowerSpec::new(0.25, 500, 2).unwrap();
        let c = power_curve(&s, &[0.2]).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("theta,power_sliding,power_blockwise\n0.2,"));
    }
}
