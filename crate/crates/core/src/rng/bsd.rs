use serde::{Deserialize, Serialize};

const DEG: usize = 31;
const SEP: usize = 3;
const WARMUP: usize = 310;

/// The additive feedback generator behind BSD/glibc `random()`:
/// 31 words over `x^31 + x^3 + 1`, seeded through the Park-Miller
/// recurrence, 310 outputs discarded, each output `(r[i-31] + r[i-3]) >> 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BsdRandom {
    seed: u32,
    table: Vec<u32>,
    front: usize,
    rear: usize,
}

impl BsdRandom {
    /// Seed 0 behaves like seed 1, as in the reference.
    pub fn new(seed: u32) -> Self {
        let seed = if seed == 0 { 1 } else { seed };
        let mut table = vec![0u32; DEG];
        table[0] = seed;
        let mut word = seed as i32 as i64;
        for slot in table.iter_mut().skip(1) {
            // 16807 * word mod (2^31 - 1) without overflow (Schrage)
            let hi = word / 127_773;
            let lo = word % 127_773;
            word = 16_807 * lo - 2_836 * hi;
            if word < 0 {
                word += 2_147_483_647;
            }
            *slot = word as u32;
        }
        let mut g = BsdRandom {
            seed,
            table,
            front: SEP,
            rear: 0,
        };
        for _ in 0..WARMUP {
            g.next_u31();
        }
        g
    }

    pub fn seed(&self) -> u32 {
        self.seed
    }

    /// Next 31-bit output.
    pub fn next_u31(&mut self) -> u32 {
        let sum = self.table[self.front].wrapping_add(self.table[self.rear]);
        self.table[self.front] = sum;
        self.front = (self.front + 1) % DEG;
        self.rear = (self.rear + 1) % DEG;
        sum >> 1
    }

    /// The 31 raw state words, oldest first.
    pub fn raw_state(&self) -> Vec<u32> {
        (0..DEG)
            .map(|i| self.table[(self.front + i) % DEG])
            .collect()
    }
}
