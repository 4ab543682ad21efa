use std::collections::BTreeSet;

use crate::error::Result;
use crate::sequence::{PeriodDoubling, Source};
use crate::words::{Letter, Word};

fn windows(d: &[Letter], len_max: usize) -> BTreeSet<(usize, Vec<Letter>)> {
    let mut set = BTreeSet::new();
    for len in 1..=len_max.min(d.len()) {
        for w in d.windows(len) {
            set.insert((len, w.to_vec()));
        }
    }
    set
}

/// Every distinct factor of `D` of length `1..=len_max`, shortest first and
/// lexicographic within a length.
///
/// Factors are read off a prefix of `64 * len_max` letters, doubled until the
/// set stops changing.
pub fn factors_up_to(pd: &PeriodDoubling, len_max: usize) -> Result<Vec<Word>> {
    let mut len = (64 * len_max).max(64);
    let mut current = pd.with_prefix(Source::D, len, |d| windows(d, len_max))?;
    loop {
        len *= 2;
        let next = pd.with_prefix(Source::D, len, |d| windows(d, len_max))?;
        if next == current {
            break;
        }
        current = next;
    }
    Ok(current.into_iter().map(|(_, w)| Word::from(w)).collect())
}
