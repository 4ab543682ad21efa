//! The period-doubling sequence `D`, the fixed point of `a ↦ ab`, `b ↦ aa`,
//! together with its envelope words and the return-word sequences of its
//! factors.
//!
//! Every factor `ω` of `D` sits at a unique position inside a least envelope
//! word `E = μ1 ω μ2`. The return words of `ω` are conjugates of those of `E`,
//! and their coding is one of two fixed sequences, `Θ_1` or `Θ_2`. This crate
//! computes those objects directly from `D` and from closed forms, and
//! [`verify`] checks that both routes agree.
//!
//! ```
//! use pdwords::{decompose, word, PeriodDoubling, Classification};
//!
//! let pd = PeriodDoubling::shared();
//! let d = decompose(pd, &word("aba"), 4).unwrap();
//! assert_eq!(d.classification, Classification::Theta1);
//! assert_eq!(d.returns[0], word("abaa"));
//! ```

mod error;
mod search;
mod words;

pub mod envelope;
pub mod returns;
pub mod sequence;
pub mod verify;

pub use envelope::{
    env, env_extension, envelope_at_rank, envelope_len, envelope_rank, envelope_word,
    inner_envelope, is_factor, separator_word, EnvelopeExtension, EnvelopeWord,
};
pub use error::{Error, Result};
pub use returns::{
    coded_block, decompose, envelope_return_words, occurrences, predicted_decomposition,
    predicted_positions, return_lengths, return_words, slots, Classification, OccurrenceStream,
    ReturnDecomposition, ReturnLengths,
};
pub use search::Matcher;
pub use sequence::{
    apply_morphism, block_a, block_b, delta, pd_prefix, theta_prefix, Kind, Limits, Morphism,
    PeriodDoubling, Source, DEFAULT_MAX_COUNT, DEFAULT_MAX_LEN, DEFAULT_MAX_ORDER,
};
pub use words::{
    complement, concat, find_occurrences, is_palindrome, mirror, strip_last, strip_prefix, word,
    Letter, Word,
};
