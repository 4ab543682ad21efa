//! Letters, words and the elementary word algebra.
//!
//! Positions are 1-indexed and ranges inclusive: `w.slice(i, j)` is
//! `x_i ... x_j`, and `w.slice(i, i - 1)` is the empty word.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
    /// Only produced by the second coding morphism.
    C,
}

impl Letter {
    pub const fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::C => 'c',
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'a' => Ok(Letter::A),
            'b' => Ok(Letter::B),
            'c' => Ok(Letter::C),
            other => Err(Error::InvalidLetter(other)),
        }
    }

    /// Swaps `a` and `b`.
    pub fn complement(self) -> Result<Self> {
        match self {
            Letter::A => Ok(Letter::B),
            Letter::B => Ok(Letter::A),
            Letter::C => Err(Error::NoComplement(self)),
        }
    }

    pub(crate) const fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut buf = [0u8; 4];
        serializer.serialize_str(self.as_char().encode_utf8(&mut buf))
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Letter::from_char(c).map_err(serde::de::Error::custom),
            _ => Err(serde::de::Error::custom(format!(
                "expected a single letter, got {s:?}"
            ))),
        }
    }
}

/// A finite word. The empty word is `Word::default()`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub const fn new() -> Self {
        Word(Vec::new())
    }

    pub fn with_capacity(capacity: usize) -> Self {
        Word(Vec::with_capacity(capacity))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    /// The letter at 1-indexed position `i`.
    pub fn at(&self, i: usize) -> Option<Letter> {
        i.checked_sub(1).and_then(|k| self.0.get(k).copied())
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// `w[i, j]`, 1-indexed and inclusive. Panics when `j > |w|` or `i > j + 1`.
    pub fn slice(&self, i: usize, j: usize) -> Word {
        assert!(
            i >= 1 && j <= self.len() && i <= j + 1,
            "slice [{i}, {j}] out of range"
        );
        Word(self.0[i - 1..j].to_vec())
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_suffix_of(&self, other: &Word) -> bool {
        other.0.ends_with(&self.0)
    }

    /// Whether `self` occurs as a factor of `text`.
    pub fn is_factor_of(&self, text: &Word) -> bool {
        self.is_empty() || text.0.windows(self.len()).any(|w| w == self.0.as_slice())
    }

    /// Whether every letter is `a` or `b`.
    pub fn is_binary(&self) -> bool {
        self.0.iter().all(|&l| l != Letter::C)
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word(letters)
    }
}

impl From<&[Letter]> for Word {
    fn from(letters: &[Letter]) -> Self {
        Word(letters.to_vec())
    }
}

impl From<Letter> for Word {
    fn from(letter: Letter) -> Self {
        Word(vec![letter])
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars().map(Letter::from_char).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|l| l.as_char()).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({:?})", self.to_string())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a literal word, panicking on letters outside `{a, b, c}`.
pub fn word(s: &str) -> Word {
    s.parse()
        .unwrap_or_else(|e| panic!("bad word literal {s:?}: {e}"))
}

pub fn concat(u: &Word, v: &Word) -> Word {
    let mut out = Word::with_capacity(u.len() + v.len());
    out.extend_from(u);
    out.extend_from(v);
    out
}

pub fn mirror(w: &Word) -> Word {
    w.0.iter().rev().copied().collect()
}

pub fn is_palindrome(w: &Word) -> bool {
    let n = w.len();
    (0..n / 2).all(|k| w.0[k] == w.0[n - 1 - k])
}

/// Letterwise `a <-> b`; fails on `c`.
pub fn complement(w: &Word) -> Result<Word> {
    w.0.iter().map(|l| l.complement()).collect()
}

/// `w δ^{-1}`: drops the last letter.
pub fn strip_last(w: &Word) -> Result<Word> {
    match w.0.split_last() {
        Some((_, rest)) => Ok(Word::from(rest)),
        None => Err(Error::EmptyWord),
    }
}

/// `p^{-1} w`: drops the prefix `p`.
pub fn strip_prefix(p: &Word, w: &Word) -> Result<Word> {
    match w.0.strip_prefix(p.0.as_slice()) {
        Some(rest) => Ok(Word::from(rest)),
        None => Err(Error::NotAPrefix {
            prefix: p.clone(),
            word: w.clone(),
        }),
    }
}

/// Every 1-indexed start of `pattern` in `text`, overlaps included.
///
/// This is a direct letter-by-letter scan at every position. It is the
/// reference the faster matcher in [`crate::search`] is checked against.
pub fn find_occurrences(pattern: &Word, text: &Word) -> Result<Vec<usize>> {
    find_occurrences_in(pattern.letters(), text.letters())
}

pub(crate) fn find_occurrences_in(pattern: &[Letter], text: &[Letter]) -> Result<Vec<usize>> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if pattern.len() > text.len() {
        return Ok(Vec::new());
    }
    Ok((0..=text.len() - pattern.len())
        .filter(|&i| text[i..i + pattern.len()] == *pattern)
        .map(|i| i + 1)
        .collect())
}
