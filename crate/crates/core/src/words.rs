//! Alphabets, words and partial words.
//!
//! Letters are stored as indices into an [`Alphabet`]; a partial word stores
//! `None` for the wildcard `?`, which matches any single symbol. Occurrence
//! positions are 0-based here: a pattern of length `m` can occur at positions
//! `0..=n-m` of a text of length `n`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a symbol within its alphabet.
pub type Symbol = u8;

/// Character used for the wildcard in serialized partial words.
pub const WILDCARD: char = '?';

/// Default cap on the number of wildcards expanded by [`PartialWord::realizations`].
pub const DEFAULT_REALIZATION_LIMIT: usize = 20;

/// An ordered list of distinct symbols, at least two of them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<char>", into = "Vec<char>")]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.len() < 2 {
            return Err(Error::InvalidAlphabet(format!(
                "need at least 2 symbols, got {}",
                symbols.len()
            )));
        }
        if symbols.len() > usize::from(Symbol::MAX) {
            return Err(Error::InvalidAlphabet(format!(
                "at most {} symbols supported",
                Symbol::MAX
            )));
        }
        if symbols.contains(&WILDCARD) {
            return Err(Error::InvalidAlphabet(
                "the wildcard '?' cannot be a symbol".into(),
            ));
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol {c:?}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Parses an alphabet written as a string of its symbols, e.g. `"01"` or `"ACGT"`.
    pub fn parse(s: &str) -> Result<Self> {
        Alphabet::new(s.chars())
    }

    pub fn binary() -> Self {
        Alphabet {
            symbols: vec!['0', '1'],
        }
    }

    pub fn dna() -> Self {
        Alphabet {
            symbols: vec!['A', 'C', 'G', 'T'],
        }
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn index_of(&self, c: char) -> Option<Symbol> {
        self.symbols
            .iter()
            .position(|&s| s == c)
            .map(|i| i as Symbol)
    }

    pub fn symbol(&self, index: Symbol) -> char {
        self.symbols[usize::from(index)]
    }

    /// Parses a text (possibly empty) over this alphabet.
    pub fn text(&self, s: &str) -> Result<Vec<Symbol>> {
        s.chars()
            .map(|c| {
                self.index_of(c).ok_or_else(|| Error::InvalidWord {
                    word: s.to_string(),
                    reason: format!("symbol {c:?} is not in the alphabet"),
                })
            })
            .collect()
    }

    pub fn word(&self, s: &str) -> Result<Word> {
        Word::new(self.text(s)?).map_err(|_| Error::InvalidWord {
            word: s.to_string(),
            reason: "empty word".into(),
        })
    }

    pub fn partial(&self, s: &str) -> Result<PartialWord> {
        let letters = s
            .chars()
            .map(|c| {
                if c == WILDCARD {
                    Ok(None)
                } else {
                    self.index_of(c)
                        .map(Some)
                        .ok_or_else(|| Error::InvalidWord {
                            word: s.to_string(),
                            reason: format!("symbol {c:?} is not in the alphabet"),
                        })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        PartialWord::new(letters).map_err(|e| match e {
            Error::InvalidWord { reason, .. } => Error::InvalidWord {
                word: s.to_string(),
                reason,
            },
            other => other,
        })
    }

    pub fn render(&self, letters: &[Symbol]) -> String {
        letters.iter().map(|&l| self.symbol(l)).collect()
    }

    pub fn render_partial(&self, pw: &PartialWord) -> String {
        pw.letters()
            .iter()
            .map(|l| l.map_or(WILDCARD, |s| self.symbol(s)))
            .collect()
    }

    fn check_symbols<'a>(&self, letters: impl IntoIterator<Item = &'a Symbol>) -> Result<()> {
        for &l in letters {
            if usize::from(l) >= self.size() {
                return Err(Error::InvalidWord {
                    word: format!("<symbol index {l}>"),
                    reason: format!("index outside alphabet of size {}", self.size()),
                });
            }
        }
        Ok(())
    }

    /// Checks that every non-wildcard letter of `pw` is a valid index for this alphabet.
    pub fn check_partial(&self, pw: &PartialWord) -> Result<()> {
        self.check_symbols(pw.letters().iter().flatten())
    }
}

impl TryFrom<Vec<char>> for Alphabet {
    type Error = Error;

    fn try_from(symbols: Vec<char>) -> Result<Self> {
        Alphabet::new(symbols)
    }
}

impl From<Alphabet> for Vec<char> {
    fn from(a: Alphabet) -> Self {
        a.symbols
    }
}

/// A nonempty word over an alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(letters: Vec<Symbol>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidWord {
                word: String::new(),
                reason: "empty word".into(),
            });
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn to_partial(&self) -> PartialWord {
        PartialWord(self.0.iter().copied().map(Some).collect())
    }

    /// Length of the longest nonempty proper border (prefix that is also a
    /// suffix), computed with the prefix function.
    pub fn longest_border(&self) -> usize {
        let w = &self.0;
        let mut pi = vec![0usize; w.len()];
        for i in 1..w.len() {
            let mut k = pi[i - 1];
            while k > 0 && w[i] != w[k] {
                k = pi[k - 1];
            }
            if w[i] == w[k] {
                k += 1;
            }
            pi[i] = k;
        }
        pi.last().copied().unwrap_or(0)
    }

    pub fn has_proper_border(&self) -> bool {
        self.longest_border() > 0
    }

    /// True iff the word occurs at two distinct positions of some string
    /// shorter than twice its length, i.e. two copies fit at a shift `d`
    /// with `1 <= d < |w|`.
    pub fn is_self_overlapping(&self) -> bool {
        patterns_overlap(&self.to_partial().0, &self.to_partial().0, true)
    }
}

/// A word over the alphabet extended with the wildcard `?`.
///
/// At least one letter is not a wildcard.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialWord(Vec<Option<Symbol>>);

impl PartialWord {
    pub fn new(letters: Vec<Option<Symbol>>) -> Result<Self> {
        if letters.iter().all(Option::is_none) {
            return Err(Error::InvalidWord {
                word: letters.iter().map(|_| WILDCARD).collect(),
                reason: "a partial word needs at least one non-wildcard letter".into(),
            });
        }
        Ok(PartialWord(letters))
    }

    pub fn letters(&self) -> &[Option<Symbol>] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn wildcard_count(&self) -> usize {
        self.0.iter().filter(|l| l.is_none()).count()
    }

    /// The word obtained by deleting every wildcard.
    pub fn tilde(&self) -> Word {
        Word(self.0.iter().flatten().copied().collect())
    }

    /// Returns the plain word when there are no wildcards.
    pub fn as_word(&self) -> Option<Word> {
        self.0.iter().copied().collect::<Option<Vec<_>>>().map(Word)
    }

    /// All substitutions of the wildcards by alphabet symbols, in
    /// lexicographic order of symbol indices.
    pub fn realizations(&self, alphabet: &Alphabet, limit: usize) -> Result<Vec<Word>> {
        let wildcards = self.wildcard_count();
        if wildcards > limit {
            return Err(Error::WildcardLimit { wildcards, limit });
        }
        alphabet.check_partial(self)?;
        let q = alphabet.size();
        let total = q.pow(wildcards as u32);
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0usize; wildcards];
        for _ in 0..total {
            let mut it = digits.iter();
            let letters = self
                .0
                .iter()
                .map(|l| l.unwrap_or_else(|| *it.next().unwrap() as Symbol))
                .collect();
            out.push(Word(letters));
            // odometer, last wildcard varies fastest
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < q {
                    break;
                }
                *d = 0;
            }
        }
        Ok(out)
    }

    /// True iff the realization set is nonoverlapping. Decided on the pattern
    /// itself: two realizations can sit at shift `d` exactly when every
    /// aligned pair of letters is compatible.
    pub fn is_nonoverlapping(&self) -> bool {
        !patterns_overlap(&self.0, &self.0, true)
    }

    /// True iff `self` is a literal prefix of `other` over the extended alphabet.
    pub fn is_prefix_of(&self, other: &PartialWord) -> bool {
        self.len() <= other.len() && other.0[..self.len()] == self.0[..]
    }

    /// True iff the pattern matches `text` at `pos`.
    pub fn matches_at(&self, text: &[Symbol], pos: usize) -> bool {
        pos + self.len() <= text.len()
            && self
                .0
                .iter()
                .zip(&text[pos..])
                .all(|(l, &c)| l.is_none_or(|s| s == c))
    }

    /// The nonoverlapping family `0^m (1 ?^(m-1))^(m-1) 1` over symbols 0 and 1.
    ///
    /// Its length is `m^2 + 1` and it has `2m` fixed letters.
    pub fn family(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("family index must be >= 1".into()));
        }
        let mut letters = vec![Some(0); m];
        for _ in 0..m - 1 {
            letters.push(Some(1));
            letters.extend(std::iter::repeat_n(None, m - 1));
        }
        letters.push(Some(1));
        PartialWord::new(letters)
    }
}

impl From<Word> for PartialWord {
    fn from(w: Word) -> Self {
        w.to_partial()
    }
}

impl fmt::Display for PartialWord {
    /// Renders symbol indices as digits; use [`Alphabet::render_partial`] for real symbols.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            match l {
                Some(s) => write!(f, "{s}")?,
                None => write!(f, "{WILDCARD}")?,
            }
        }
        Ok(())
    }
}

fn compatible(a: Option<Symbol>, b: Option<Symbol>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x == y,
        _ => true,
    }
}

/// Whether occurrences of `x` and `y` can intersect. Every relative placement
/// with a nonempty intersection is tried; the coincident placement is skipped
/// when `x` and `y` are the same pattern (it is one occurrence, not two).
pub(crate) fn patterns_overlap(x: &[Option<Symbol>], y: &[Option<Symbol>], same: bool) -> bool {
    let (lx, ly) = (x.len() as isize, y.len() as isize);
    // y starts at offset d relative to the start of x
    for d in (1 - ly)..lx {
        if d == 0 && same {
            continue;
        }
        let lo = d.max(0);
        let hi = lx.min(d + ly);
        if (lo..hi).all(|i| compatible(x[i as usize], y[(i - d) as usize])) {
            return true;
        }
    }
    false
}

/// True iff some string shorter than `|x| + |y|` contains an occurrence of
/// `x` and a distinct occurrence of `y`. For `x == y` this is self-overlap.
pub fn is_pair_overlapping(x: &Word, y: &Word) -> bool {
    patterns_overlap(&x.to_partial().0, &y.to_partial().0, x == y)
}

/// True iff every ordered pair of `set`, including each word with itself, is
/// nonoverlapping. Repeated words are treated as one set element.
pub fn is_set_nonoverlapping(set: &[Word]) -> bool {
    set.iter()
        .all(|x| set.iter().all(|y| !is_pair_overlapping(x, y)))
}

/// True iff occurrences of two distinct patterns `x` and `y` can intersect
/// or coincide. Self-overlap of either pattern is not considered.
pub fn partial_pair_overlapping(x: &PartialWord, y: &PartialWord) -> bool {
    patterns_overlap(&x.0, &y.0, false)
}

/// Pattern-level check for a list of partial words counted jointly: each is
/// nonoverlapping and no two distinct entries can have intersecting or
/// coincident occurrences.
pub fn is_partial_set_nonoverlapping(words: &[PartialWord]) -> bool {
    words.iter().enumerate().all(|(i, x)| {
        words
            .iter()
            .enumerate()
            .all(|(j, y)| !patterns_overlap(&x.0, &y.0, i == j))
    })
}

/// Strictly increasing in length, each a literal prefix of the next.
pub fn is_prefix_chain(words: &[PartialWord]) -> bool {
    !words.is_empty()
        && words
            .windows(2)
            .all(|w| w[0].len() < w[1].len() && w[0].is_prefix_of(&w[1]))
}

/// Sliding counts every position; block-wise counts the `floor(n/m)`
/// disjoint aligned blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Sampling {
    #[default]
    Sliding,
    Blockwise,
}

pub fn count_occurrences(text: &[Symbol], pw: &PartialWord, mode: Sampling) -> u64 {
    let m = pw.len();
    if text.len() < m {
        return 0;
    }
    match mode {
        Sampling::Sliding => (0..=text.len() - m)
            .filter(|&i| pw.matches_at(text, i))
            .count() as u64,
        Sampling::Blockwise => (0..text.len() / m)
            .filter(|&b| pw.matches_at(text, b * m))
            .count() as u64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin() -> Alphabet {
        Alphabet::binary()
    }

    fn w(s: &str) -> Word {
        bin().word(s).unwrap()
    }

    fn pw(s: &str) -> PartialWord {
        bin().partial(s).unwrap()
    }

    fn all_binary(len: usize) -> impl Iterator<Item = Vec<Symbol>> {
        (0u32..1 << len).map(move |bits| {
            (0..len)
                .map(|i| ((bits >> (len - 1 - i)) & 1) as Symbol)
                .collect()
        })
    }

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::parse("0").is_err());
        assert!(Alphabet::parse("00").is_err());
        assert!(Alphabet::parse("0?").is_err());
        assert_eq!(Alphabet::parse("ACGT").unwrap(), Alphabet::dna());
        assert!(bin().word("012").is_err());
        assert!(bin().word("").is_err());
        assert!(bin().partial("???").is_err());
    }

    #[test]
    fn self_overlap_examples() {
        assert!(w("11").is_self_overlapping());
        assert!(!w("10").is_self_overlapping());
        assert!(!w("00111").is_self_overlapping());
        assert!(w("0110").is_self_overlapping());
    }

    #[test]
    fn pair_overlap_examples() {
        assert!(is_pair_overlapping(&w("10"), &w("01")));
        assert!(!is_pair_overlapping(&w("00111"), &w("00101")));
        // containment counts as overlap
        assert!(is_pair_overlapping(&w("0"), &w("01")));
    }

    #[test]
    fn set_examples() {
        assert!(!is_set_nonoverlapping(&[w("00"), w("11")]));
        assert!(is_set_nonoverlapping(&[w("00111"), w("00101")]));
        assert!(is_set_nonoverlapping(&[w("10")]));
        assert!(!is_set_nonoverlapping(&[w("10"), w("01")]));
    }

    #[test]
    fn border_and_shift_characterizations_agree() {
        for len in 1..=10 {
            for letters in all_binary(len) {
                let word = Word::new(letters).unwrap();
                assert_eq!(word.has_proper_border(), word.is_self_overlapping());
                assert_eq!(
                    word.is_self_overlapping(),
                    is_pair_overlapping(&word, &word)
                );
            }
        }
    }

    #[test]
    fn realization_examples() {
        let r = pw("001?1").realizations(&bin(), 20).unwrap();
        assert_eq!(r, vec![w("00101"), w("00111")]);
        assert_eq!(
            pw("0110").realizations(&bin(), 20).unwrap(),
            vec![w("0110")]
        );
        let r = bin()
            .partial("?1")
            .unwrap()
            .realizations(&bin(), 20)
            .unwrap();
        assert_eq!(r, vec![w("01"), w("11")]);
        assert!(matches!(
            pw("0??1").realizations(&bin(), 1),
            Err(Error::WildcardLimit {
                wildcards: 2,
                limit: 1
            })
        ));
    }

    #[test]
    fn single_wildcard_realizations() {
        // "?" alone is not a valid partial word; pair it with a fixed letter
        let r = pw("?0").realizations(&bin(), 20).unwrap();
        assert_eq!(r, vec![w("00"), w("10")]);
        let dna = Alphabet::dna();
        let r = dna.partial("A?").unwrap().realizations(&dna, 20).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(dna.render(r[2].letters()), "AG");
    }

    #[test]
    fn partial_nonoverlap_examples() {
        assert!(pw("001?1").is_nonoverlapping());
        assert!(pw("0001??1??1").is_nonoverlapping());
        assert!(!pw("1?1").is_nonoverlapping());
    }

    #[test]
    fn tilde_examples() {
        assert_eq!(pw("01?1").tilde(), w("011"));
        assert_eq!(pw("0110").tilde(), w("0110"));
        assert_eq!(pw("0001??1??1").tilde(), w("000111"));
    }

    #[test]
    fn family_examples() {
        let b = bin();
        assert_eq!(
            b.render_partial(&PartialWord::family(3).unwrap()),
            "0001??1??1"
        );
        assert_eq!(b.render_partial(&PartialWord::family(1).unwrap()), "01");
        assert_eq!(PartialWord::family(10).unwrap().len(), 101);
        assert!(PartialWord::family(0).is_err());
    }

    #[test]
    fn prefix_chain_examples() {
        assert!(is_prefix_chain(&[pw("01?1"), pw("01?11")]));
        assert!(!is_prefix_chain(&[pw("01?1"), pw("01111")]));
        assert!(is_prefix_chain(&[pw("011"), pw("0111"), pw("01111")]));
        assert!(!is_prefix_chain(&[pw("011"), pw("011")]));
    }

    #[test]
    fn count_examples() {
        let b = bin();
        let text = b.text("1011101").unwrap();
        assert_eq!(count_occurrences(&text, &pw("10"), Sampling::Sliding), 2);
        assert_eq!(count_occurrences(&text, &pw("11"), Sampling::Sliding), 2);
        let text = b.text("00110011").unwrap();
        assert_eq!(count_occurrences(&text, &pw("01"), Sampling::Sliding), 2);
        assert_eq!(count_occurrences(&text, &pw("01"), Sampling::Blockwise), 0);
        assert_eq!(count_occurrences(&text, &pw("00"), Sampling::Blockwise), 2);
        assert_eq!(count_occurrences(&text, &pw("1?"), Sampling::Sliding), 3);
        assert_eq!(
            count_occurrences(&b.text("1").unwrap(), &pw("10"), Sampling::Sliding),
            0
        );
    }
}
