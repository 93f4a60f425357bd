//! Finite binary words, dyadic rationals in [0,1] and the dyadic intervals
//! that words address.
//!
//! Words are stored most-significant bit first: the first symbol is the
//! first branching at the root of a tree, and `.u` is the binary fraction
//! whose expansion starts with `u`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Longest word accepted from text input.
pub const MAX_WORD_LEN: usize = 4096;

/// Longest word the equivalence trie can address (its depth limit).
pub const MAX_TRIE_DEPTH: u32 = 24;

/// A finite word over {0,1}.
///
/// Ordering is lexicographic with a prefix sorting before its extensions,
/// so the leaves of a full binary tree sort left to right.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(SmallVec<[u8; 24]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    /// Builds a word from symbols; panics on anything other than 0 or 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        assert!(
            bits.iter().all(|&b| b <= 1),
            "binary word symbols must be 0 or 1"
        );
        Word(SmallVec::from_slice(bits))
    }

    /// `bit` repeated `count` times.
    pub fn repeat(bit: u8, count: usize) -> Self {
        assert!(bit <= 1);
        Word(SmallVec::from_elem(bit, count))
    }

    pub fn zeros(count: usize) -> Self {
        Self::repeat(0, count)
    }

    pub fn ones(count: usize) -> Self {
        Self::repeat(1, count)
    }

    /// Concatenation of runs, e.g. `runs(&[(0, 3), (1, 1)])` is `0001`.
    pub fn runs(runs: &[(u8, usize)]) -> Self {
        let mut w = Word::empty();
        for &(bit, count) in runs {
            assert!(bit <= 1);
            w.0.extend(std::iter::repeat_n(bit, count));
        }
        w
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn push(&mut self, bit: u8) {
        assert!(bit <= 1);
        self.0.push(bit);
    }

    /// Returns `self` followed by `bit`.
    pub fn child(&self, bit: u8) -> Word {
        let mut w = self.clone();
        w.push(bit);
        w
    }

    /// Concatenation `self · other`.
    pub fn append(&self, other: &Word) -> Word {
        self.append_bits(&other.0)
    }

    pub fn append_bits(&self, bits: &[u8]) -> Word {
        let mut v = SmallVec::with_capacity(self.len() + bits.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(bits);
        Word(v)
    }

    /// True iff `self` is an initial segment of `other` (every word prefixes itself).
    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// The suffix `w` with `self ≡ prefix · w`, if `prefix` is a prefix.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<&[u8]> {
        self.0.strip_prefix(prefix.0.as_slice())
    }

    pub fn contains_both_digits(&self) -> bool {
        self.0.contains(&0) && self.0.contains(&1)
    }

    /// Length of the maximal run of `bit` at the end of the word.
    pub fn trailing(&self, bit: u8) -> usize {
        self.0.iter().rev().take_while(|&&b| b == bit).count()
    }

    /// True iff the word is `bit^k` for some k ≥ 0.
    pub fn is_constant(&self, bit: u8) -> bool {
        self.0.iter().all(|&b| b == bit)
    }

    /// Heap index of the word in the complete binary trie: `2^len - 1 + value`.
    pub fn trie_index(&self) -> Option<u32> {
        if self.len() > MAX_TRIE_DEPTH as usize {
            return None;
        }
        let mut idx: u32 = 0;
        for &b in &self.0 {
            idx = 2 * idx + 1 + b as u32;
        }
        Some(idx)
    }

    pub fn from_trie_index(mut idx: u32) -> Word {
        let mut bits = SmallVec::<[u8; 24]>::new();
        while idx > 0 {
            let b = ((idx - 1) & 1) as u8;
            bits.push(b);
            idx = (idx - 1) / 2;
        }
        bits.reverse();
        Word(bits)
    }

    pub fn parse(text: &str) -> Result<Word> {
        let text = text.trim();
        if text == "e" || text == "ε" {
            return Ok(Word::empty());
        }
        if text.is_empty() {
            return Err(Error::Parse {
                offset: 0,
                expected: "binary word or \"e\"".into(),
            });
        }
        if text.len() > MAX_WORD_LEN {
            return Err(Error::CapacityExceeded {
                what: "word length",
                limit: MAX_WORD_LEN,
            });
        }
        let mut w = Word::empty();
        for (offset, c) in text.char_indices() {
            match c {
                '0' => w.0.push(0),
                '1' => w.0.push(1),
                _ => {
                    return Err(Error::Parse {
                        offset,
                        expected: "'0' or '1'".into(),
                    })
                }
            }
        }
        Ok(w)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        Word::parse(s)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("e");
        }
        for &b in &self.0 {
            f.write_str(if b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self)
    }
}

/// A dyadic rational `numerator / 2^exponent` in [0,1], kept in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigUint,
    exponent: u32,
}

impl Dyadic {
    pub fn new(numerator: impl Into<BigUint>, exponent: u32) -> Result<Dyadic> {
        let mut numerator = numerator.into();
        if numerator > (BigUint::one() << exponent) {
            return Err(Error::InvalidDyadic(format!(
                "{}/2^{} exceeds 1",
                numerator, exponent
            )));
        }
        let mut exponent = exponent;
        if numerator.is_zero() {
            exponent = 0;
        } else {
            let tz = numerator.trailing_zeros().unwrap_or(0).min(exponent as u64) as u32;
            numerator >>= tz;
            exponent -= tz;
        }
        Ok(Dyadic {
            numerator,
            exponent,
        })
    }

    pub fn zero() -> Dyadic {
        Dyadic {
            numerator: BigUint::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Dyadic {
        Dyadic {
            numerator: BigUint::one(),
            exponent: 0,
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.exponent == 0 && self.numerator.is_one()
    }

    /// The value `.w` (binary fraction with finite expansion `w`).
    pub fn from_expansion(w: &Word) -> Dyadic {
        let mut num = BigUint::zero();
        for &b in w.bits() {
            num <<= 1u32;
            if b == 1 {
                num += 1u32;
            }
        }
        Dyadic::new(num, w.len() as u32).expect("finite expansion is below 1")
    }

    /// The shortest finite expansion of a value in [0,1); `None` for 1.
    pub fn expansion(&self) -> Option<Word> {
        if self.is_one() {
            return None;
        }
        let e = self.exponent as usize;
        let mut bits = vec![0u8; e];
        for (i, slot) in bits.iter_mut().enumerate() {
            if self.numerator.bit((e - 1 - i) as u64) {
                *slot = 1;
            }
        }
        Some(Word::from_bits(&bits))
    }

    pub fn parse(text: &str) -> Result<Dyadic> {
        let text = text.trim();
        let bad = || Error::InvalidDyadic(text.to_string());
        let Some((num, den)) = text.split_once('/') else {
            let num: BigUint = text.parse().map_err(|_| bad())?;
            return Dyadic::new(num, 0);
        };
        let num: BigUint = num.trim().parse().map_err(|_| bad())?;
        let den = den.trim();
        let exponent = if let Some(k) = den.strip_prefix("2^") {
            k.parse::<u32>().map_err(|_| bad())?
        } else {
            let d: BigUint = den.parse().map_err(|_| bad())?;
            if d.is_zero() || d.count_ones() != 1 {
                return Err(bad());
            }
            (d.bits() - 1) as u32
        };
        Dyadic::new(num, exponent)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            return write!(f, "{}", self.numerator);
        }
        if self.exponent < 64 {
            write!(f, "{}/{}", self.numerator, 1u64 << self.exponent)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.exponent)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({})", self)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Dyadic> {
        Dyadic::parse(s)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        let a = &self.numerator << (e - self.exponent);
        let b = &other.numerator << (e - other.exponent);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The interval `[.u, .u1^∞]` addressed by `u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicInterval {
    pub word: Word,
}

impl DyadicInterval {
    pub fn new(word: Word) -> Self {
        DyadicInterval { word }
    }

    pub fn endpoints(&self) -> (Dyadic, Dyadic) {
        interval_of(&self.word)
    }

    pub fn contains(&self, t: &Dyadic) -> bool {
        let (l, r) = self.endpoints();
        &l <= t && t <= &r
    }
}

/// Left and right endpoints of `[u]`; the width is `2^-|u|`.
pub fn interval_of(u: &Word) -> (Dyadic, Dyadic) {
    let left = Dyadic::from_expansion(u);
    let mut num = BigUint::zero();
    for &b in u.bits() {
        num = (num << 1u32) + BigUint::from(b);
    }
    let right = Dyadic::new(num + 1u32, u.len() as u32).expect("right endpoint is at most 1");
    (left, right)
}

/// Small helper for tests and diagnostics.
pub fn dyadic_to_f64(t: &Dyadic) -> f64 {
    t.numerator.to_f64().unwrap_or(f64::NAN) / 2f64.powi(t.exponent as i32)
}
