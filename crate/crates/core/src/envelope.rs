//! Envelope words `E_{1,m} = A_m δ_m^{-1}` and `E_{2,m} = B_m B_{m-1} δ_m^{-1}`,
//! their total order, and the envelope `Env(ω)` of a factor: the least
//! envelope word containing it.
//!
//! A factor occurs exactly once in its envelope, which splits the envelope
//! uniquely as `μ1 · ω · μ2` (see [`env_extension`]).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::search::Matcher;
use crate::sequence::{block_a, block_b, Kind, PeriodDoubling, Source};
use crate::words::{complement, concat, find_occurrences, strip_last, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnvelopeWord {
    pub kind: Kind,
    #[serde(rename = "m")]
    pub order: u32,
    pub word: Word,
}

impl EnvelopeWord {
    pub fn rank(&self) -> u64 {
        envelope_rank(self.kind, self.order)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvelopeExtension {
    pub envelope: EnvelopeWord,
    pub mu1: Word,
    pub mu2: Word,
    pub factor: Word,
}

/// `|E_{1,m}| = 2^m - 1`, `|E_{2,m}| = 3 * 2^{m-1} - 1`.
pub fn envelope_len(kind: Kind, m: u32) -> usize {
    match kind {
        Kind::One => (1usize << m) - 1,
        Kind::Two => 3 * (1usize << (m - 1)) - 1,
    }
}

pub fn envelope_word(kind: Kind, m: u32) -> Result<EnvelopeWord> {
    if m == 0 {
        return Err(Error::ZeroOrder);
    }
    let word = match kind {
        Kind::One => strip_last(&block_a(m)?)?,
        Kind::Two => strip_last(&concat(&block_b(m)?, &block_b(m - 1)?))?,
    };
    Ok(EnvelopeWord {
        kind,
        order: m,
        word,
    })
}

/// Position in `E_{1,1} ⊏ E_{2,1} ⊏ E_{1,2} ⊏ E_{2,2} ⊏ ...`, starting at 0.
pub fn envelope_rank(kind: Kind, m: u32) -> u64 {
    2 * (u64::from(m) - 1) + u64::from(kind.as_u8()) - 1
}

/// Inverse of [`envelope_rank`].
pub fn envelope_at_rank(rank: u64) -> (Kind, u32) {
    let kind = if rank.is_multiple_of(2) {
        Kind::One
    } else {
        Kind::Two
    };
    (kind, (rank / 2 + 1) as u32)
}

/// Whether `w` is a factor of `D`, decided on a stabilized prefix.
///
/// Presence is final as soon as it is seen. Absence is reported once the
/// answer has stayed the same over two doublings of the scanned prefix, or
/// once the configured length cap has been scanned.
pub fn is_factor(pd: &PeriodDoubling, w: &Word) -> Result<bool> {
    if w.is_empty() {
        return Ok(true);
    }
    if !w.is_binary() {
        return Ok(false);
    }
    let matcher = Matcher::new(w)?;
    let cap = pd.limits().max_len;
    let start = (64 * w.len()).max(1024).min(cap);
    for len in [start, 2 * start, 4 * start] {
        let len = len.min(cap);
        let found = pd.with_prefix(Source::D, len, |d| !matcher.find_up_to(d, 1).is_empty())?;
        if found {
            return Ok(true);
        }
        if len == cap {
            break;
        }
    }
    Ok(false)
}

pub(crate) fn require_factor(pd: &PeriodDoubling, factor: &Word) -> Result<()> {
    if factor.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !is_factor(pd, factor)? {
        return Err(Error::NotAFactor(factor.clone()));
    }
    Ok(())
}

/// Highest envelope order `env` will try before giving up.
fn search_bound(len: usize) -> u32 {
    let bits = usize::BITS - len.leading_zeros(); // ceil(log2(len + 1))
    bits + 8
}

/// `Env(ω)`: the ⊏-least envelope word having `factor` as a factor.
pub fn env(pd: &PeriodDoubling, factor: &Word) -> Result<EnvelopeWord> {
    require_factor(pd, factor)?;
    let max_order = search_bound(factor.len());
    for m in 1..=max_order {
        pd.limits().check_order(m)?;
        for kind in [Kind::One, Kind::Two] {
            if envelope_len(kind, m) < factor.len() {
                continue;
            }
            let e = envelope_word(kind, m)?;
            if factor.is_factor_of(&e.word) {
                return Ok(e);
            }
        }
    }
    Err(Error::EnvelopeSearchExhausted {
        factor: factor.clone(),
        max_order,
    })
}

/// The unique `(μ1, μ2)` with `Env(ω) = μ1 ω μ2`.
pub fn env_extension(pd: &PeriodDoubling, factor: &Word) -> Result<EnvelopeExtension> {
    let envelope = env(pd, factor)?;
    let hits = find_occurrences(factor, &envelope.word)?;
    let &[q] = hits.as_slice() else {
        return Err(Error::ExtensionNotUnique {
            factor: factor.clone(),
            envelope: envelope.word.clone(),
            count: hits.len(),
        });
    };
    let mu1 = envelope.word.slice(1, q - 1);
    let mu2 = envelope.word.slice(q + factor.len(), envelope.word.len());
    Ok(EnvelopeExtension {
        envelope,
        mu1,
        mu2,
        factor: factor.clone(),
    })
}

/// The letters `x_1 ... x_h` in `E_{kind,m} = E_{1,n} x_1 E_{1,n} ... x_h E_{1,n}`.
///
/// This is `E_{kind,m-n}` for even `n` and its complement for odd `n`.
pub fn separator_word(kind: Kind, m: u32, n: u32) -> Result<Word> {
    if n == 0 || n >= m {
        return Err(Error::InvalidSeparator { m, n });
    }
    let inner = envelope_word(kind, m - n)?.word;
    if n.is_multiple_of(2) {
        Ok(inner)
    } else {
        complement(&inner)
    }
}

/// The envelope word every factor with envelope order `m > 2` must contain:
/// `E_{1,m-2}` when `Env(ω) = E_{1,m}`, `E_{1,m-1}` when `Env(ω) = E_{2,m}`.
pub fn inner_envelope(pd: &PeriodDoubling, factor: &Word) -> Result<Option<EnvelopeWord>> {
    let e = env(pd, factor)?;
    if e.order <= 2 {
        return Ok(None);
    }
    let inner = match e.kind {
        Kind::One => envelope_word(Kind::One, e.order - 2)?,
        Kind::Two => envelope_word(Kind::One, e.order - 1)?,
    };
    if !inner.word.is_factor_of(factor) {
        return Err(Error::InnerEnvelopeMissing {
            factor: factor.clone(),
            inner: inner.word,
        });
    }
    Ok(Some(inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::delta;
    use crate::words::{is_palindrome, word, Letter};

    fn pd() -> &'static PeriodDoubling {
        PeriodDoubling::shared()
    }

    #[test]
    fn envelope_word_examples() {
        assert_eq!(envelope_word(Kind::One, 2).unwrap().word, word("aba"));
        assert_eq!(envelope_word(Kind::Two, 1).unwrap().word, word("aa"));
        assert_eq!(envelope_word(Kind::Two, 2).unwrap().word, word("ababa"));
        assert_eq!(envelope_word(Kind::One, 0), Err(Error::ZeroOrder));
        assert!(envelope_word(Kind::One, 31).is_err());
    }

    #[test]
    fn envelope_lengths_and_palindromes() {
        for m in 1..=14 {
            for kind in [Kind::One, Kind::Two] {
                let e = envelope_word(kind, m).unwrap();
                assert_eq!(e.word.len(), envelope_len(kind, m));
                assert!(is_palindrome(&e.word));
            }
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(envelope_rank(Kind::One, 1), 0);
        assert_eq!(envelope_rank(Kind::Two, 1), 1);
        assert_eq!(envelope_rank(Kind::One, 2), 2);
        for r in 0..40 {
            let (k, m) = envelope_at_rank(r);
            assert_eq!(envelope_rank(k, m), r);
        }
    }

    #[test]
    fn env_examples() {
        let e = env(pd(), &word("a")).unwrap();
        assert_eq!((e.kind, e.order), (Kind::One, 1));
        let e = env(pd(), &word("aa")).unwrap();
        assert_eq!((e.kind, e.order), (Kind::Two, 1));
        let e = env(pd(), &word("b")).unwrap();
        assert_eq!((e.kind, e.order), (Kind::One, 2));
    }

    #[test]
    fn env_rejects_non_factors() {
        assert_eq!(env(pd(), &Word::new()), Err(Error::EmptyWord));
        assert_eq!(env(pd(), &word("bb")), Err(Error::NotAFactor(word("bb"))));
        assert_eq!(env(pd(), &word("abb")), Err(Error::NotAFactor(word("abb"))));
        assert_eq!(
            env(pd(), &word("aaaa")),
            Err(Error::NotAFactor(word("aaaa")))
        );
        assert_eq!(env(pd(), &word("ac")), Err(Error::NotAFactor(word("ac"))));
    }

    #[test]
    fn extension_examples() {
        let x = env_extension(pd(), &word("b")).unwrap();
        assert_eq!(x.envelope.word, word("aba"));
        assert_eq!((x.mu1, x.mu2), (word("a"), word("a")));
        let x = env_extension(pd(), &word("aba")).unwrap();
        assert_eq!((x.mu1, x.mu2), (Word::new(), Word::new()));
        let x = env_extension(pd(), &word("ab")).unwrap();
        assert_eq!(x.envelope.word, word("aba"));
        assert_eq!((x.mu1, x.mu2), (Word::new(), word("a")));
    }

    #[test]
    fn separator_examples() {
        assert_eq!(separator_word(Kind::One, 3, 1).unwrap(), word("bab"));
        assert_eq!(separator_word(Kind::Two, 3, 1).unwrap(), word("babab"));
        assert_eq!(separator_word(Kind::One, 3, 2).unwrap(), word("a"));
        assert_eq!(
            separator_word(Kind::One, 3, 3),
            Err(Error::InvalidSeparator { m: 3, n: 3 })
        );
        assert!(separator_word(Kind::One, 3, 0).is_err());
    }

    #[test]
    fn separators_sit_at_multiples_of_the_block_period() {
        for m in 2..=10 {
            for n in 1..m {
                for kind in [Kind::One, Kind::Two] {
                    let e = envelope_word(kind, m).unwrap().word;
                    let period = 1usize << n;
                    let extracted: Word = (1..=e.len())
                        .filter(|i| i % period == 0)
                        .map(|i| e.at(i).unwrap())
                        .collect();
                    assert_eq!(
                        separator_word(kind, m, n).unwrap(),
                        extracted,
                        "{kind:?} {m} {n}"
                    );
                }
            }
        }
    }

    #[test]
    fn inner_envelope_examples() {
        let inner = inner_envelope(pd(), &word("abaaaba")).unwrap().unwrap();
        assert_eq!(inner.word, word("a"));
        assert_eq!(inner_envelope(pd(), &word("b")).unwrap(), None);
        assert_eq!(inner_envelope(pd(), &word("ababa")).unwrap(), None);
    }

    #[test]
    fn recursion_in_terms_of_smaller_envelopes() {
        for m in 1..=12 {
            let e = envelope_word(Kind::One, m).unwrap().word;
            let d = Word::from(delta(m));
            let once = concat(&concat(&e, &d), &e);
            assert_eq!(envelope_word(Kind::One, m + 1).unwrap().word, once);
            assert_eq!(
                envelope_word(Kind::Two, m + 1).unwrap().word,
                concat(&concat(&once, &d), &e)
            );
        }
        assert_eq!(
            envelope_word(Kind::One, 3).unwrap().word.at(4),
            Some(Letter::A)
        );
    }
}
