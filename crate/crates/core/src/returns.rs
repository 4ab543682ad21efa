//! Occurrences and return words of factors of `D`.
//!
//! Two independent routes lead to the same decomposition:
//!
//! * [`decompose`] scans `D` for occurrences, cuts out the return words and
//!   codes them over `{a, b}` or `{a, b, c}`;
//! * [`predicted_decomposition`] and [`predicted_positions`] never scan. They
//!   take the envelope extension `Env(ω) = μ1 ω μ2`, the known return words of
//!   envelope words, and conjugate them by `μ1`.
//!
//! Code letters are assigned by slot: `a ↦ r_1`, `b ↦ r_2`, and for the
//! second kind `c ↦ r_4`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::envelope::{env, env_extension, require_factor, EnvelopeExtension};
use crate::error::{Error, Result};
use crate::search::Matcher;
use crate::sequence::{Kind, PeriodDoubling, Source};
use crate::words::{concat, strip_prefix, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    Theta1,
    Theta2,
}

impl Classification {
    pub fn kind(self) -> Kind {
        match self {
            Classification::Theta1 => Kind::One,
            Classification::Theta2 => Kind::Two,
        }
    }
}

impl From<Kind> for Classification {
    fn from(kind: Kind) -> Self {
        match kind {
            Kind::One => Classification::Theta1,
            Kind::Two => Classification::Theta2,
        }
    }
}

/// The first `P` occurrences of a factor in `D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OccurrenceStream {
    pub factor: Word,
    /// `L(ω, 1) < ... < L(ω, P)`, 1-indexed.
    pub positions: Vec<usize>,
    /// `L(ω, P + 1)`, which closes the last return word.
    pub next: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReturnDecomposition {
    pub factor: Word,
    pub r0: Word,
    pub returns: Vec<Word>,
    pub coded: Word,
    pub classification: Classification,
    /// Code letter to return word. Holds only the slots witnessed among the
    /// first `P` return words.
    pub alphabet: BTreeMap<Letter, Word>,
}

impl ReturnDecomposition {
    /// True when fewer than all slots of the alphabet were witnessed.
    pub fn is_partial(&self) -> bool {
        self.alphabet.len() < slots(self.classification.kind()).len()
    }

    pub fn distinct_returns(&self) -> usize {
        let mut seen: Vec<&Word> = self.returns.iter().collect();
        seen.sort();
        seen.dedup();
        seen.len()
    }
}

/// Code letter and the index `p` of the return word it names.
pub fn slots(kind: Kind) -> &'static [(Letter, usize)] {
    match kind {
        Kind::One => &[(Letter::A, 1), (Letter::B, 2)],
        Kind::Two => &[(Letter::A, 1), (Letter::B, 2), (Letter::C, 4)],
    }
}

pub fn occurrences(pd: &PeriodDoubling, factor: &Word, count: usize) -> Result<OccurrenceStream> {
    pd.limits().check_count(count)?;
    require_factor(pd, factor)?;
    let matcher = Matcher::new(factor)?;
    let cap = pd.limits().max_len;
    let mut window = (64 * factor.len()).max(1024).min(cap);
    loop {
        let mut hits = pd.with_prefix(Source::D, window, |d| matcher.find_up_to(d, count + 1))?;
        if hits.len() > count {
            let next = hits.pop().expect("count + 1 hits");
            return Ok(OccurrenceStream {
                factor: factor.clone(),
                positions: hits,
                next,
            });
        }
        if window == cap {
            return Err(Error::OccurrencesExhausted {
                factor: factor.clone(),
                needed: count + 1,
                found: hits.len(),
                window,
            });
        }
        window = (2 * window).min(cap);
    }
}

/// `r_0` and the return words `r_1 ... r_P`.
pub fn return_words(pd: &PeriodDoubling, factor: &Word, count: usize) -> Result<(Word, Vec<Word>)> {
    let stream = occurrences(pd, factor, count)?;
    split_returns(pd, &stream)
}

pub(crate) fn split_returns(
    pd: &PeriodDoubling,
    stream: &OccurrenceStream,
) -> Result<(Word, Vec<Word>)> {
    pd.with_prefix(Source::D, stream.next - 1, |d| {
        let r0 = Word::from(&d[..stream.positions[0] - 1]);
        let mut bounds = stream.positions.clone();
        bounds.push(stream.next);
        let returns = bounds
            .windows(2)
            .map(|w| Word::from(&d[w[0] - 1..w[1] - 1]))
            .collect();
        (r0, returns)
    })
}

/// The scanned decomposition. Fails with [`Error::ClassificationMismatch`]
/// if the coded return words disagree with the expected `Θ` prefix.
pub fn decompose(pd: &PeriodDoubling, factor: &Word, count: usize) -> Result<ReturnDecomposition> {
    let stream = occurrences(pd, factor, count)?;
    let kind = env(pd, factor)?.kind;
    let (r0, returns) = split_returns(pd, &stream)?;

    let alphabet: BTreeMap<Letter, Word> = slots(kind)
        .iter()
        .filter(|&&(_, p)| p <= count)
        .map(|&(letter, p)| (letter, returns[p - 1].clone()))
        .collect();
    let expected = pd.theta_prefix(kind, count)?;

    let mut coded = Word::with_capacity(count);
    for (i, r) in returns.iter().enumerate() {
        let want = expected.letters()[i];
        let got = alphabet.iter().find(|(_, w)| *w == r).map(|(&l, _)| l);
        if got != Some(want) {
            return Err(Error::ClassificationMismatch {
                factor: factor.clone(),
                position: i + 1,
                expected: want,
                found: r.clone(),
            });
        }
        coded.push(want);
    }

    Ok(ReturnDecomposition {
        factor: factor.clone(),
        r0,
        returns,
        coded,
        classification: kind.into(),
        alphabet,
    })
}

/// `r_0(E_{kind,m})` and the return words of `E_{kind,m}` by code letter:
/// `a ↦ A_m, b ↦ A_{m-1}` for the first kind, and
/// `a ↦ A_{m-1}, b ↦ A_{m-1} A_m B_{m+1}, c ↦ B_m B_{m-1}` (with `r_0 = A_m`)
/// for the second.
pub fn envelope_return_words(
    pd: &PeriodDoubling,
    kind: Kind,
    m: u32,
) -> Result<(Word, BTreeMap<Letter, Word>)> {
    if m == 0 {
        return Err(Error::ZeroOrder);
    }
    let a = |k| pd.block_a(k);
    let b = |k| pd.block_b(k);
    Ok(match kind {
        Kind::One => (
            Word::new(),
            BTreeMap::from([(Letter::A, a(m)?), (Letter::B, a(m - 1)?)]),
        ),
        Kind::Two => (
            a(m)?,
            BTreeMap::from([
                (Letter::A, a(m - 1)?),
                (Letter::B, concat(&concat(&a(m - 1)?, &a(m)?), &b(m + 1)?)),
                (Letter::C, concat(&b(m)?, &b(m - 1)?)),
            ]),
        ),
    })
}

/// `μ^{-1} w μ`.
fn conjugate(w: &Word, mu: &Word) -> Result<Word> {
    Ok(concat(&strip_prefix(mu, w)?, mu))
}

/// The decomposition built from the envelope extension alone.
pub fn predicted_decomposition(
    pd: &PeriodDoubling,
    factor: &Word,
    count: usize,
) -> Result<ReturnDecomposition> {
    pd.limits().check_count(count)?;
    let ext = env_extension(pd, factor)?;
    predicted_from_extension(pd, &ext, count)
}

pub(crate) fn predicted_from_extension(
    pd: &PeriodDoubling,
    ext: &EnvelopeExtension,
    count: usize,
) -> Result<ReturnDecomposition> {
    let kind = ext.envelope.kind;
    let (r0, known) = envelope_return_words(pd, kind, ext.envelope.order)?;
    let by_letter: BTreeMap<Letter, Word> = known
        .iter()
        .map(|(&l, w)| Ok((l, conjugate(w, &ext.mu1)?)))
        .collect::<Result<_>>()?;

    let coded = pd.theta_prefix(kind, count)?;
    let returns = coded
        .letters()
        .iter()
        .map(|l| by_letter[l].clone())
        .collect();
    let alphabet = slots(kind)
        .iter()
        .filter(|&&(_, p)| p <= count)
        .map(|&(l, _)| (l, by_letter[&l].clone()))
        .collect();

    Ok(ReturnDecomposition {
        factor: ext.factor.clone(),
        r0: concat(&r0, &ext.mu1),
        returns,
        coded,
        classification: kind.into(),
        alphabet,
    })
}

/// Closed-form lengths of `r_0` and of the return word behind each code letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnLengths {
    pub r0: usize,
    pub by_letter: BTreeMap<Letter, usize>,
}

pub fn return_lengths(kind: Kind, m: u32, mu1_len: usize) -> ReturnLengths {
    let half = 1usize << (m - 1);
    match kind {
        Kind::One => ReturnLengths {
            r0: mu1_len,
            by_letter: BTreeMap::from([(Letter::A, 2 * half), (Letter::B, half)]),
        },
        Kind::Two => ReturnLengths {
            r0: 2 * half + mu1_len,
            by_letter: BTreeMap::from([
                (Letter::A, half),
                (Letter::B, 7 * half),
                (Letter::C, 3 * half),
            ]),
        },
    }
}

/// `L(ω, 1..=P)` as partial sums of the closed-form return-word lengths.
pub fn predicted_positions(pd: &PeriodDoubling, factor: &Word, count: usize) -> Result<Vec<usize>> {
    pd.limits().check_count(count)?;
    let ext = env_extension(pd, factor)?;
    let kind = ext.envelope.kind;
    let lengths = return_lengths(kind, ext.envelope.order, ext.mu1.len());
    let coded = pd.theta_prefix(kind, count)?;
    let mut position = lengths.r0 + 1;
    let mut out = Vec::with_capacity(count);
    for l in coded.letters() {
        out.push(position);
        position += lengths.by_letter[l];
    }
    Ok(out)
}

/// `A_n` and `B_n` spelled over the coding alphabet of `E_{kind,m}`:
/// `(A_{m+n}, B_{m+n})` for the first kind and
/// `(A_m^{-1} A_{m+n+2} A_m, A_m^{-1} B_{m+n+2} A_m)` for the second.
pub fn coded_block(pd: &PeriodDoubling, kind: Kind, m: u32, n: u32) -> Result<(Word, Word)> {
    if m == 0 {
        return Err(Error::ZeroOrder);
    }
    match kind {
        Kind::One => Ok((pd.block_a(m + n)?, pd.block_b(m + n)?)),
        Kind::Two => {
            let am = pd.block_a(m)?;
            Ok((
                conjugate(&pd.block_a(m + n + 2)?, &am)?,
                conjugate(&pd.block_b(m + n + 2)?, &am)?,
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::word;

    fn pd() -> &'static PeriodDoubling {
        PeriodDoubling::shared()
    }

    fn words(ws: &[&str]) -> Vec<Word> {
        ws.iter().map(|w| word(w)).collect()
    }

    #[test]
    fn occurrence_examples() {
        assert_eq!(
            occurrences(pd(), &word("aba"), 3).unwrap().positions,
            [1, 5, 7]
        );
        assert_eq!(
            occurrences(pd(), &word("aa"), 5).unwrap().positions,
            [3, 4, 11, 12, 15]
        );
        let s = occurrences(pd(), &word("a"), 3).unwrap();
        assert_eq!(s.positions, [1, 3, 4]);
        assert_eq!(s.next, 5);
    }

    #[test]
    fn occurrence_errors() {
        assert_eq!(occurrences(pd(), &word("a"), 0), Err(Error::ZeroCount));
        assert_eq!(occurrences(pd(), &Word::new(), 1), Err(Error::EmptyWord));
        assert_eq!(
            occurrences(pd(), &word("abb"), 1),
            Err(Error::NotAFactor(word("abb")))
        );
    }

    #[test]
    fn occurrences_exhaust_a_small_cap() {
        let small = PeriodDoubling::new(crate::sequence::Limits {
            max_len: 1024,
            ..Default::default()
        });
        // E_{1,6} has 63 letters; its returns are 32 or 64 letters long
        let e = crate::envelope::envelope_word(Kind::One, 6).unwrap().word;
        match occurrences(&small, &e, 100) {
            Err(Error::OccurrencesExhausted { window, needed, .. }) => {
                assert_eq!(window, 1024);
                assert_eq!(needed, 101);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn return_word_examples() {
        let (r0, r) = return_words(pd(), &word("aba"), 2).unwrap();
        assert_eq!(r0, Word::new());
        assert_eq!(r, words(&["abaa", "ab"]));

        let (r0, r) = return_words(pd(), &word("aa"), 4).unwrap();
        assert_eq!(r0, word("ab"));
        assert_eq!(r, words(&["a", "aababab", "a", "aab"]));

        let (r0, r) = return_words(pd(), &word("b"), 2).unwrap();
        assert_eq!(r0, word("a"));
        assert_eq!(r, words(&["baaa", "ba"]));
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(pd(), &word("aba"), 5).unwrap();
        assert_eq!(d.coded, word("abbaa"));
        assert_eq!(d.classification, Classification::Theta1);
        assert!(!d.is_partial());

        let d = decompose(pd(), &word("aa"), 6).unwrap();
        assert_eq!(d.coded, word("abacac"));
        assert_eq!(d.classification, Classification::Theta2);
        assert_eq!(d.alphabet[&Letter::C], word("aab"));

        // occurrences of "a": 1, 3, 4, 5, 7 -> ab, a, a, ab
        let d = decompose(pd(), &word("a"), 4).unwrap();
        assert_eq!(d.returns, words(&["ab", "a", "a", "ab"]));
        assert_eq!(d.coded, word("abba"));
    }

    #[test]
    fn short_counts_leave_the_alphabet_partial() {
        let d = decompose(pd(), &word("aa"), 3).unwrap();
        assert_eq!(d.classification, Classification::Theta2);
        assert!(d.is_partial());
        assert_eq!(d.alphabet.len(), 2);
        assert_eq!(d, predicted_decomposition(pd(), &word("aa"), 3).unwrap());
    }

    #[test]
    fn predicted_examples() {
        let p = predicted_decomposition(pd(), &word("b"), 2).unwrap();
        assert_eq!(p.r0, word("a"));
        assert_eq!(p.returns, words(&["baaa", "ba"]));

        let p = predicted_decomposition(pd(), &word("aba"), 2).unwrap();
        assert_eq!(p.r0, Word::new());
        assert_eq!(p.returns, words(&["abaa", "ab"]));

        let p = predicted_decomposition(pd(), &word("aa"), 4).unwrap();
        assert_eq!(p.r0, word("ab"));
        assert_eq!(p.returns, words(&["a", "aababab", "a", "aab"]));
    }

    #[test]
    fn predicted_position_examples() {
        assert_eq!(
            predicted_positions(pd(), &word("aba"), 3).unwrap(),
            [1, 5, 7]
        );
        assert_eq!(
            predicted_positions(pd(), &word("aa"), 5).unwrap(),
            [3, 4, 11, 12, 15]
        );
        assert_eq!(predicted_positions(pd(), &word("b"), 2).unwrap(), [2, 6]);
    }

    #[test]
    fn coded_block_examples() {
        assert_eq!(coded_block(pd(), Kind::One, 1, 1).unwrap().0, word("abaa"));
        assert_eq!(
            coded_block(pd(), Kind::Two, 1, 0).unwrap().0,
            word("aaababab")
        );
        assert_eq!(coded_block(pd(), Kind::One, 2, 0).unwrap().0, word("abaa"));
        assert_eq!(coded_block(pd(), Kind::One, 0, 0), Err(Error::ZeroOrder));
    }

    #[test]
    fn routes_agree_on_short_factors() {
        for w in [
            "a", "b", "aa", "ab", "ba", "aab", "aaab", "baaa", "babaa", "abaaaba",
        ] {
            let w = word(w);
            assert_eq!(
                decompose(pd(), &w, 32).unwrap(),
                predicted_decomposition(pd(), &w, 32).unwrap()
            );
            assert_eq!(
                occurrences(pd(), &w, 32).unwrap().positions,
                predicted_positions(pd(), &w, 32).unwrap()
            );
        }
    }
}
