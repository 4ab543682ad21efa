//! Linear-time occurrence search (Knuth–Morris–Pratt).
//!
//! Occurrence streams over long prefixes go through here; the quadratic scan
//! in [`crate::words::find_occurrences`] stays the reference implementation.

use crate::error::{Error, Result};
use crate::words::{Letter, Word};

#[derive(Clone, Debug)]
pub struct Matcher {
    pattern: Vec<Letter>,
    // border[k] = length of the longest proper border of pattern[..=k]
    border: Vec<usize>,
}

impl Matcher {
    pub fn new(pattern: &Word) -> Result<Self> {
        let pattern = pattern.letters().to_vec();
        if pattern.is_empty() {
            return Err(Error::EmptyPattern);
        }
        let mut border = vec![0; pattern.len()];
        let mut k = 0;
        for i in 1..pattern.len() {
            while k > 0 && pattern[i] != pattern[k] {
                k = border[k - 1];
            }
            if pattern[i] == pattern[k] {
                k += 1;
            }
            border[i] = k;
        }
        Ok(Matcher { pattern, border })
    }

    pub fn pattern_len(&self) -> usize {
        self.pattern.len()
    }

    /// 1-indexed starts of every occurrence in `text`, overlaps included.
    pub fn find_all(&self, text: &[Letter]) -> Vec<usize> {
        self.find_up_to(text, usize::MAX)
    }

    /// Like [`Matcher::find_all`] but stops after `limit` hits.
    pub fn find_up_to(&self, text: &[Letter], limit: usize) -> Vec<usize> {
        let n = self.pattern.len();
        let mut hits = Vec::new();
        let mut k = 0;
        for (i, &letter) in text.iter().enumerate() {
            if hits.len() >= limit {
                break;
            }
            while k > 0 && letter != self.pattern[k] {
                k = self.border[k - 1];
            }
            if letter == self.pattern[k] {
                k += 1;
            }
            if k == n {
                hits.push(i + 2 - n);
                k = self.border[k - 1];
            }
        }
        hits
    }
}
