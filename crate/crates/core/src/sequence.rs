//! The period-doubling sequence `D`, its blocks `A_m = σ^m(a)` and
//! `B_m = σ^m(b)`, and the two coded sequences `Θ_1 = τ_1(D)`, `Θ_2 = τ_2(D)`.

use std::sync::{OnceLock, PoisonError, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{Letter, Word};

pub const DEFAULT_MAX_ORDER: u32 = 30;
pub const DEFAULT_MAX_LEN: usize = 1 << 26;
pub const DEFAULT_MAX_COUNT: usize = 1 << 20;

/// Resource caps shared by every sequence-backed operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest `m` accepted for `A_m`, `B_m` and envelope words.
    pub max_order: u32,
    /// Longest prefix any cached sequence may grow to.
    pub max_len: usize,
    /// Largest number of occurrences / return words requested at once.
    pub max_count: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: DEFAULT_MAX_ORDER,
            max_len: DEFAULT_MAX_LEN,
            max_count: DEFAULT_MAX_COUNT,
        }
    }
}

impl Limits {
    pub fn check_order(&self, order: u32) -> Result<()> {
        if order > self.max_order {
            return Err(Error::OrderTooLarge {
                order,
                limit: self.max_order,
            });
        }
        Ok(())
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        if len > self.max_len {
            return Err(Error::LengthTooLarge {
                len,
                cap: self.max_len,
            });
        }
        Ok(())
    }

    pub fn check_count(&self, count: usize) -> Result<()> {
        if count == 0 {
            return Err(Error::ZeroCount);
        }
        if count > self.max_count {
            return Err(Error::CountTooLarge {
                count,
                cap: self.max_count,
            });
        }
        Ok(())
    }
}

/// Envelope type, and equally the choice between `Θ_1` and `Θ_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    One,
    Two,
}

impl Kind {
    pub const fn as_u8(self) -> u8 {
        match self {
            Kind::One => 1,
            Kind::Two => 2,
        }
    }
}

impl TryFrom<u8> for Kind {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        match value {
            1 => Ok(Kind::One),
            2 => Ok(Kind::Two),
            other => Err(Error::InvalidKind(other)),
        }
    }
}

impl Serialize for Kind {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.as_u8())
    }
}

impl<'de> Deserialize<'de> for Kind {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Kind::try_from(u8::deserialize(deserializer)?).map_err(serde::de::Error::custom)
    }
}

/// A non-erasing letter-to-word map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    images: [Option<Word>; 3],
}

impl Morphism {
    /// Panics if an image is empty.
    pub fn new(a: Word, b: Word) -> Self {
        Self::from_images([Some(a), Some(b), None])
    }

    fn from_images(images: [Option<Word>; 3]) -> Self {
        assert!(
            images.iter().flatten().all(|w| !w.is_empty()),
            "morphism images must be nonempty"
        );
        Morphism { images }
    }

    /// `σ(a, b) = (ab, aa)`.
    pub fn sigma() -> Self {
        Self::new(
            Word::from(vec![Letter::A, Letter::B]),
            Word::from(vec![Letter::A, Letter::A]),
        )
    }

    /// `τ_1(a, b) = (a, bb)` and `τ_2(a, b) = (ab, acac)`.
    pub fn tau(kind: Kind) -> Self {
        use Letter::*;
        match kind {
            Kind::One => Self::new(Word::from(vec![A]), Word::from(vec![B, B])),
            Kind::Two => Self::new(Word::from(vec![A, B]), Word::from(vec![A, C, A, C])),
        }
    }

    pub fn image(&self, letter: Letter) -> Option<&Word> {
        self.images[letter.index()].as_ref()
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.apply_letters(w.letters())
    }

    pub(crate) fn apply_letters(&self, letters: &[Letter]) -> Result<Word> {
        let mut out = Vec::with_capacity(letters.len() * 2);
        for &l in letters {
            let image = self.image(l).ok_or(Error::MissingImage(l))?;
            out.extend_from_slice(image.letters());
        }
        Ok(Word::from(out))
    }
}

pub fn apply_morphism(m: &Morphism, w: &Word) -> Result<Word> {
    m.apply(w)
}

fn iterate_sigma(start: Letter, m: u32, limits: &Limits) -> Result<Word> {
    limits.check_order(m)?;
    let sigma = Morphism::sigma();
    let mut w = Word::from(start);
    for _ in 0..m {
        w = sigma.apply(&w)?;
    }
    Ok(w)
}

/// `A_m = σ^m(a)`, computed by iterating `σ` (independently of any cache).
pub fn block_a(m: u32) -> Result<Word> {
    iterate_sigma(Letter::A, m, &Limits::default())
}

/// `B_m = σ^m(b)`.
pub fn block_b(m: u32) -> Result<Word> {
    iterate_sigma(Letter::B, m, &Limits::default())
}

/// `δ_m`, the last letter of `A_m`: `a` for even `m`, `b` for odd.
pub const fn delta(m: u32) -> Letter {
    if m.is_multiple_of(2) {
        Letter::A
    } else {
        Letter::B
    }
}

/// Which infinite word a cache holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Source {
    D,
    Theta1,
    Theta2,
}

impl Source {
    pub fn theta(kind: Kind) -> Self {
        match kind {
            Kind::One => Source::Theta1,
            Kind::Two => Source::Theta2,
        }
    }
}

/// A lazily grown prefix of one of the infinite words.
///
/// Readers share the lock; growth takes the write lock, so a reader only
/// ever sees a complete prefix.
#[derive(Debug)]
pub struct SequenceCache {
    source: Source,
    buffer: RwLock<Vec<Letter>>,
}

impl SequenceCache {
    fn new(source: Source) -> Self {
        SequenceCache {
            source,
            buffer: RwLock::new(Vec::new()),
        }
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn len(&self) -> usize {
        self.buffer
            .read()
            .unwrap_or_else(PoisonError::into_inner)
            .len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grows to at least `n` letters using `grow(target)`, which must return a
    /// prefix of length `target`.
    fn ensure(
        &self,
        n: usize,
        cap: usize,
        grow: impl FnOnce(usize) -> Result<Vec<Letter>>,
    ) -> Result<()> {
        if self.len() >= n {
            return Ok(());
        }
        let mut buf = self.buffer.write().unwrap_or_else(PoisonError::into_inner);
        if buf.len() >= n {
            return Ok(());
        }
        let target = n.max(2 * buf.len()).min(cap);
        let grown = grow(target)?;
        debug_assert!(grown.starts_with(&buf));
        *buf = grown;
        Ok(())
    }

    fn read<R>(&self, n: usize, f: impl FnOnce(&[Letter]) -> R) -> R {
        let buf = self.buffer.read().unwrap_or_else(PoisonError::into_inner);
        f(&buf[..n])
    }
}

/// Owner of the cached prefixes of `D`, `Θ_1` and `Θ_2`.
#[derive(Debug)]
pub struct PeriodDoubling {
    limits: Limits,
    d: SequenceCache,
    theta1: SequenceCache,
    theta2: SequenceCache,
    faults: Vec<usize>,
}

impl Default for PeriodDoubling {
    fn default() -> Self {
        Self::new(Limits::default())
    }
}

impl PeriodDoubling {
    pub fn new(limits: Limits) -> Self {
        PeriodDoubling {
            limits,
            d: SequenceCache::new(Source::D),
            theta1: SequenceCache::new(Source::Theta1),
            theta2: SequenceCache::new(Source::Theta2),
            faults: Vec::new(),
        }
    }

    /// A process-wide instance with default limits.
    pub fn shared() -> &'static PeriodDoubling {
        static SHARED: OnceLock<PeriodDoubling> = OnceLock::new();
        SHARED.get_or_init(PeriodDoubling::default)
    }

    /// An instance whose cached prefix of `D` has the letters at the given
    /// 1-indexed positions swapped `a <-> b`, reapplied every time the cache
    /// grows. Used to check that the verification suites notice a corrupted
    /// sequence. Blocks and envelope words are unaffected.
    pub fn with_faults(limits: Limits, positions: &[usize]) -> Self {
        let mut pd = Self::new(limits);
        pd.faults = positions.iter().copied().filter(|&p| p >= 1).collect();
        pd
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn cached_len(&self, source: Source) -> usize {
        self.cache(source).len()
    }

    fn cache(&self, source: Source) -> &SequenceCache {
        match source {
            Source::D => &self.d,
            Source::Theta1 => &self.theta1,
            Source::Theta2 => &self.theta2,
        }
    }

    pub fn block_a(&self, m: u32) -> Result<Word> {
        iterate_sigma(Letter::A, m, &self.limits)
    }

    pub fn block_b(&self, m: u32) -> Result<Word> {
        iterate_sigma(Letter::B, m, &self.limits)
    }

    /// Runs `f` on the length-`n` prefix of `source`, growing the cache first.
    pub fn with_prefix<R>(
        &self,
        source: Source,
        n: usize,
        f: impl FnOnce(&[Letter]) -> R,
    ) -> Result<R> {
        self.limits.check_len(n)?;
        match source {
            Source::D => {
                self.d.ensure(n, self.limits.max_len, |target| {
                    let mut letters = grow_d(target)?;
                    for &p in self.faults.iter().filter(|&&p| p <= target) {
                        letters[p - 1] = letters[p - 1].complement()?;
                    }
                    Ok(letters)
                })?;
                Ok(self.d.read(n, f))
            }
            Source::Theta1 | Source::Theta2 => {
                let kind = if source == Source::Theta1 {
                    Kind::One
                } else {
                    Kind::Two
                };
                let cache = self.cache(source);
                cache.ensure(n, self.limits.max_len, |target| {
                    self.grow_theta(kind, target)
                })?;
                Ok(cache.read(n, f))
            }
        }
    }

    // kept out of `with_prefix` so its closure types do not recurse
    fn grow_theta(&self, kind: Kind, target: usize) -> Result<Vec<Letter>> {
        // every image is nonempty, so `target` letters of D suffice
        let coded =
            self.with_prefix(Source::D, target, |d| Morphism::tau(kind).apply_letters(d))??;
        let mut letters = coded.into_letters();
        letters.truncate(target);
        Ok(letters)
    }

    pub fn prefix(&self, source: Source, n: usize) -> Result<Word> {
        self.with_prefix(source, n, |d| Word::from(d))
    }

    /// The length-`n` prefix of `D`.
    pub fn pd_prefix(&self, n: usize) -> Result<Word> {
        self.prefix(Source::D, n)
    }

    /// The first `n` letters of `Θ_kind`.
    pub fn theta_prefix(&self, kind: Kind, n: usize) -> Result<Word> {
        self.prefix(Source::theta(kind), n)
    }
}

fn grow_d(target: usize) -> Result<Vec<Letter>> {
    // σ(D[1, k]) = D[1, 2k]
    let sigma = Morphism::sigma();
    let mut buf = vec![Letter::A];
    while buf.len() < target {
        let half = buf.len().min(target.div_ceil(2));
        buf = sigma.apply_letters(&buf[..half])?.into_letters();
    }
    buf.truncate(target);
    Ok(buf)
}

/// The length-`n` prefix of `D` from the shared cache.
pub fn pd_prefix(n: usize) -> Result<Word> {
    PeriodDoubling::shared().pd_prefix(n)
}

/// The first `n` letters of `Θ_kind` from the shared cache.
pub fn theta_prefix(kind: Kind, n: usize) -> Result<Word> {
    PeriodDoubling::shared().theta_prefix(kind, n)
}
