use crate::error::{Error, Result};
use crate::exact::ExactPmf;
use crate::numeric::to_f64;

use super::Mt19937;

/// Inverse-CDF sampler over a computed law, driven by MT19937 53-bit
/// uniforms. Used as a null control: its draws follow the law exactly up to
/// floating-point rounding of the cumulative masses.
#[derive(Clone, Debug)]
pub struct ExactSampler {
    support: Vec<Vec<u64>>,
    cdf: Vec<f64>,
    rng: Mt19937,
}

impl ExactSampler {
    pub fn new(pmf: &ExactPmf, seed: u32) -> Result<Self> {
        if pmf.is_empty() {
            return Err(Error::InvalidArgument(
                "cannot sample from an empty law".into(),
            ));
        }
        let mut support = Vec::with_capacity(pmf.len());
        let mut cdf = Vec::with_capacity(pmf.len());
        let mut acc = 0.0;
        for (k, m) in pmf.iter() {
            acc += to_f64(m);
            support.push(k.clone());
            cdf.push(acc);
        }
        // truncated laws fall slightly short of 1
        for c in &mut cdf {
            *c /= acc;
        }
        Ok(ExactSampler {
            support,
            cdf,
            rng: Mt19937::new(seed),
        })
    }

    pub fn seed(&self) -> u32 {
        self.rng.seed()
    }

    pub fn sample(&mut self) -> &[u64] {
        let u = self.rng.next_f64();
        let i = self
            .cdf
            .partition_point(|&c| c <= u)
            .min(self.cdf.len() - 1);
        &self.support[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Precision;
    use crate::numeric::rat;

    #[test]
    fn frequencies_follow_the_law() {
        let pmf = ExactPmf::from_masses(
            1,
            [(vec![0], rat(1, 4)), (vec![3], rat(3, 4))],
            Precision::Exact,
        );
        let mut s = ExactSampler::new(&pmf, 9).unwrap();
        let hits = (0..100_000).filter(|_| s.sample()[0] == 3).count();
        assert!((hits as f64 / 1e5 - 0.75).abs() < 0.01);
    }
}
