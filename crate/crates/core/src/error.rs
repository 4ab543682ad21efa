use thiserror::Error;

use crate::words::{Letter, Word};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid letter {0:?}: words are spelled over a, b, c")]
    InvalidLetter(char),

    #[error("letter {0} has no complement")]
    NoComplement(Letter),

    #[error("operation needs a nonempty word")]
    EmptyWord,

    #[error("`{prefix}` is not a prefix of `{word}`")]
    NotAPrefix { prefix: Word, word: Word },

    #[error("search pattern is empty")]
    EmptyPattern,

    #[error("no image for letter {0}")]
    MissingImage(Letter),

    #[error("order {order} exceeds the configured limit {limit}")]
    OrderTooLarge { order: u32, limit: u32 },

    #[error("length {len} exceeds the configured cap {cap}")]
    LengthTooLarge { len: usize, cap: usize },

    #[error("count {count} exceeds the configured cap {cap}")]
    CountTooLarge { count: usize, cap: usize },

    #[error("count must be at least 1")]
    ZeroCount,

    #[error("invalid envelope kind {0} (expected 1 or 2)")]
    InvalidKind(u8),

    #[error("envelope order must be at least 1")]
    ZeroOrder,

    #[error("separator needs 1 <= n < m, got n = {n}, m = {m}")]
    InvalidSeparator { m: u32, n: u32 },

    #[error("`{0}` is not a factor of the period-doubling sequence")]
    NotAFactor(Word),

    #[error(
        "found only {found} of {needed} occurrences of `{factor}` in the first {window} letters"
    )]
    OccurrencesExhausted {
        factor: Word,
        needed: usize,
        found: usize,
        window: usize,
    },

    #[error("no envelope word up to order {max_order} contains `{factor}`")]
    EnvelopeSearchExhausted { factor: Word, max_order: u32 },

    #[error("`{factor}` occurs {count} times in its envelope `{envelope}`")]
    ExtensionNotUnique {
        factor: Word,
        envelope: Word,
        count: usize,
    },

    #[error("inner envelope `{inner}` is not a factor of `{factor}`")]
    InnerEnvelopeMissing { factor: Word, inner: Word },

    #[error(
        "return word {position} of `{factor}` is `{found}`, which does not code to {expected}"
    )]
    ClassificationMismatch {
        factor: Word,
        position: usize,
        expected: Letter,
        found: Word,
    },
}
