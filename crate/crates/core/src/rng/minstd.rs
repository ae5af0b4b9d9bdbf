use serde::{Deserialize, Serialize};

const MODULUS: u64 = 2_147_483_647;
const MULTIPLIER: u64 = 48_271;

/// Park-Miller minimal standard generator (`minstd_rand`, multiplier 48271).
/// Outputs lie in `1..2^31 - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinStd {
    seed: u32,
    state: u64,
}

impl MinStd {
    /// Seeds congruent to 0 become 1.
    pub fn new(seed: u32) -> Self {
        let s = u64::from(seed) % MODULUS;
        MinStd {
            seed,
            state: if s == 0 { 1 } else { s },
        }
    }

    pub fn seed(&self) -> u32 {
        self.seed
    }

    pub fn next_u31(&mut self) -> u32 {
        self.state = self.state * MULTIPLIER % MODULUS;
        self.state as u32
    }
}
