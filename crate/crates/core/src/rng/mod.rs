//! Reference generators and the conventions that turn their outputs into
//! letters.
//!
//! All arithmetic is explicit 32-bit modular arithmetic, so streams are
//! identical on every platform.

mod bits;
mod bsd;
mod minstd;
mod mt;
mod sampler;

pub use bits::{read_bits, write_bits, BitFormat};
pub use bsd::BsdRandom;
pub use minstd::MinStd;
pub use mt::Mt19937;
pub use sampler::ExactSampler;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::IidModel;
use crate::numeric::to_f64;
use crate::words::Symbol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    BsdRandom,
    Mt19937,
    LcgMinstd,
    /// Draws count vectors straight from a computed law; see [`ExactSampler`].
    ExactSampler,
}

impl GeneratorKind {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::BsdRandom => "bsd_random",
            GeneratorKind::Mt19937 => "mt19937",
            GeneratorKind::LcgMinstd => "lcg_minstd",
            GeneratorKind::ExactSampler => "exact_sampler",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "bsd_random" | "bsd" => Ok(GeneratorKind::BsdRandom),
            "mt19937" | "mt" => Ok(GeneratorKind::Mt19937),
            "lcg_minstd" | "minstd" => Ok(GeneratorKind::LcgMinstd),
            "exact_sampler" | "exact" => Ok(GeneratorKind::ExactSampler),
            _ => Err(Error::InvalidArgument(format!("unknown generator {s:?}"))),
        }
    }
}

/// A word generator with its full internal state; serializable so a stream
/// can be resumed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum GeneratorState {
    BsdRandom(BsdRandom),
    Mt19937(Mt19937),
    LcgMinstd(MinStd),
}

impl GeneratorState {
    pub fn new(kind: GeneratorKind, seed: u32) -> Result<Self> {
        match kind {
            GeneratorKind::BsdRandom => Ok(GeneratorState::BsdRandom(BsdRandom::new(seed))),
            GeneratorKind::Mt19937 => Ok(GeneratorState::Mt19937(Mt19937::new(seed))),
            GeneratorKind::LcgMinstd => Ok(GeneratorState::LcgMinstd(MinStd::new(seed))),
            GeneratorKind::ExactSampler => Err(Error::InvalidArgument(
                "the exact sampler draws counts, not words".into(),
            )),
        }
    }

    pub fn kind(&self) -> GeneratorKind {
        match self {
            GeneratorState::BsdRandom(_) => GeneratorKind::BsdRandom,
            GeneratorState::Mt19937(_) => GeneratorKind::Mt19937,
            GeneratorState::LcgMinstd(_) => GeneratorKind::LcgMinstd,
        }
    }

    pub fn seed(&self) -> u32 {
        match self {
            GeneratorState::BsdRandom(g) => g.seed(),
            GeneratorState::Mt19937(g) => g.seed(),
            GeneratorState::LcgMinstd(g) => g.seed(),
        }
    }

    /// Bits per output word: 31 for the BSD and Lehmer generators, 32 for MT.
    pub fn width(&self) -> u32 {
        match self {
            GeneratorState::Mt19937(_) => 32,
            _ => 31,
        }
    }

    #[inline]
    pub fn next_word(&mut self) -> u32 {
        match self {
            GeneratorState::BsdRandom(g) => g.next_u31(),
            GeneratorState::Mt19937(g) => g.next_u32(),
            GeneratorState::LcgMinstd(g) => g.next_u31(),
        }
    }

    /// Output word scaled into `[0, 1)`.
    pub fn next_unit(&mut self) -> f64 {
        f64::from(self.next_word()) / 2f64.powi(self.width() as i32)
    }
}

/// How one output word becomes one bit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BitExtraction {
    #[default]
    Lsb,
    Msb,
    Parity,
    /// `1` iff the word is at least half the output range.
    Threshold,
}

impl BitExtraction {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "lsb" => Ok(BitExtraction::Lsb),
            "msb" => Ok(BitExtraction::Msb),
            "parity" => Ok(BitExtraction::Parity),
            "threshold" => Ok(BitExtraction::Threshold),
            _ => Err(Error::InvalidArgument(format!(
                "unknown bit extraction {s:?}"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BitExtraction::Lsb => "lsb",
            BitExtraction::Msb => "msb",
            BitExtraction::Parity => "parity",
            BitExtraction::Threshold => "threshold",
        }
    }

    #[inline]
    pub fn extract(self, word: u32, width: u32) -> u8 {
        match self {
            BitExtraction::Lsb => (word & 1) as u8,
            BitExtraction::Msb => ((word >> (width - 1)) & 1) as u8,
            BitExtraction::Parity => (word.count_ones() & 1) as u8,
            BitExtraction::Threshold => u8::from(u64::from(word) >= 1u64 << (width - 1)),
        }
    }
}

/// Supplies letters (symbol indices) one at a time.
pub trait SymbolSource {
    fn next_symbol(&mut self) -> Result<Symbol>;

    /// Fills `out` completely or fails.
    fn fill(&mut self, out: &mut [Symbol]) -> Result<()> {
        for s in out.iter_mut() {
            *s = self.next_symbol()?;
        }
        Ok(())
    }
}

/// One bit per generator output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitSource {
    generator: GeneratorState,
    extraction: BitExtraction,
}

impl BitSource {
    pub fn new(generator: GeneratorState, extraction: BitExtraction) -> Self {
        BitSource {
            generator,
            extraction,
        }
    }

    pub fn generator(&self) -> &GeneratorState {
        &self.generator
    }

    pub fn extraction(&self) -> BitExtraction {
        self.extraction
    }

    #[inline]
    pub fn next_bit(&mut self) -> u8 {
        let width = self.generator.width();
        self.extraction.extract(self.generator.next_word(), width)
    }
}

impl SymbolSource for BitSource {
    fn next_symbol(&mut self) -> Result<Symbol> {
        Ok(self.next_bit())
    }

    fn fill(&mut self, out: &mut [Symbol]) -> Result<()> {
        let width = self.generator.width();
        for s in out.iter_mut() {
            *s = self.extraction.extract(self.generator.next_word(), width);
        }
        Ok(())
    }
}

/// Letters of a general i.i.d. model by inversion of one uniform per letter.
#[derive(Clone, Debug)]
pub struct LetterSource {
    generator: GeneratorState,
    cdf: Vec<f64>,
}

impl LetterSource {
    pub fn new(generator: GeneratorState, model: &IidModel) -> Self {
        let mut acc = 0.0;
        let cdf = model
            .probs()
            .iter()
            .map(|p| {
                acc += to_f64(p);
                acc
            })
            .collect();
        LetterSource { generator, cdf }
    }
}

impl SymbolSource for LetterSource {
    fn next_symbol(&mut self) -> Result<Symbol> {
        let u = self.generator.next_unit();
        let i = self
            .cdf
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.cdf.len() - 1);
        Ok(i as Symbol)
    }
}

/// Replays a fixed sequence, for externally produced bit files.
#[derive(Clone, Debug)]
pub struct BufferSource {
    symbols: Vec<Symbol>,
    pos: usize,
}

impl BufferSource {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        BufferSource { symbols, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.symbols.len() - self.pos
    }
}

impl SymbolSource for BufferSource {
    fn next_symbol(&mut self) -> Result<Symbol> {
        let s = *self
            .symbols
            .get(self.pos)
            .ok_or(Error::StreamExhausted(self.pos as u64))?;
        self.pos += 1;
        Ok(s)
    }
}
