//! Identities of the blocks `A_m`, `B_m`, occurrence lists inside short
//! block products, palindromic structure of envelope words, and the fixed
//! left/right contexts of the words `δ E_{1,k} δ'`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{params, run_check, CheckResult};
use crate::envelope::{envelope_word, separator_word};
use crate::error::Result;
use crate::returns::coded_block;
use crate::search::Matcher;
use crate::sequence::{block_a, block_b, delta, Kind, Morphism, PeriodDoubling, Source};
use crate::words::{concat, find_occurrences, is_palindrome, strip_last, Letter, Word};

/// Ranges for the structure suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureBounds {
    /// Block recursions, last-letter identity, product form: `m <= identity_order`.
    pub identity_order: u32,
    /// Occurrence lists of `A_m` and `B_m` in block products.
    pub block_occurrence_order: u32,
    /// Prefix length checked against `σ` and against `A_m`.
    pub fixed_point_len: usize,
    /// Prefix of `D` checked for fourth powers of a letter (`Θ_1` uses half).
    pub power_free_len: usize,
    /// Envelope recursion, palindromicity and first/last letters.
    pub envelope_order: u32,
    /// Palindromic prefixes and suffixes of envelope words.
    pub palindrome_prefix_order: u32,
    /// Palindromicity of `E_{1,n} δ_m E_{1,k}` and `E_{1,n} δ_m E_{1,m} δ_m E_{1,k}`.
    pub classification_order: u32,
    /// Separator words between copies of `E_{1,n}`.
    pub separator_order: u32,
    /// Contexts are checked over this prefix of `D` ...
    pub context_len: usize,
    /// ... for `m` up to this order.
    pub context_order: u32,
    /// `A_n`, `B_n` over the coding alphabets, for `m, n <= coded_order`.
    pub coded_order: u32,
}

impl StructureBounds {
    /// Bounds scaled from a single order; `from_max_order(12)` gives the
    /// desk-scale defaults.
    pub fn from_max_order(m_max: u32) -> Self {
        let m = m_max.max(1);
        StructureBounds {
            identity_order: m + 8,
            block_occurrence_order: m + 2,
            fixed_point_len: 1 << (m + 3),
            power_free_len: 1 << (m + 6),
            envelope_order: m + 6,
            palindrome_prefix_order: m,
            classification_order: m.min(8),
            separator_order: m.min(10),
            context_len: 1 << (m + 4),
            context_order: m.saturating_sub(2).clamp(2, 10),
            coded_order: m.min(6),
        }
    }
}

impl Default for StructureBounds {
    fn default() -> Self {
        Self::from_max_order(12)
    }
}

pub fn verify_structure(pd: &PeriodDoubling, m_max: u32) -> Vec<CheckResult> {
    verify_structure_with(pd, &StructureBounds::from_max_order(m_max))
}

/// `E_{1,n}` for `n >= 0`, with `E_{1,0} = ε`.
fn e1(n: u32) -> Result<Word> {
    strip_last(&block_a(n)?)
}

fn cat(parts: &[&Word]) -> Word {
    parts.iter().fold(Word::new(), |acc, w| concat(&acc, w))
}

fn first_difference(a: &[Letter], b: &[Letter]) -> Option<usize> {
    a.iter().zip(b).position(|(x, y)| x != y).map(|i| i + 1)
}

pub fn verify_structure_with(pd: &PeriodDoubling, b: &StructureBounds) -> Vec<CheckResult> {
    let mut out = Vec::new();

    out.push(run_check(
        "prefix-matches-blocks",
        params(json!({ "len": b.fixed_point_len })),
        |v| {
            let order = b.fixed_point_len.trailing_zeros();
            let block = block_a(order)?;
            let prefix = pd.pd_prefix(b.fixed_point_len)?;
            if let Some(i) = first_difference(prefix.letters(), block.letters()) {
                v.push(json!({ "position": i, "expected": block.at(i), "found": prefix.at(i) }));
            }
            Ok(())
        },
    ));

    out.push(run_check(
        "fixed-point",
        params(json!({ "len": b.fixed_point_len })),
        |v| {
            let n = b.fixed_point_len;
            let image = Morphism::sigma().apply(&pd.pd_prefix(n)?)?;
            let doubled = pd.pd_prefix(2 * n)?;
            if let Some(i) = first_difference(image.letters(), doubled.letters()) {
                v.push(json!({ "position": i, "image": image.at(i), "prefix": doubled.at(i) }));
            }
            Ok(())
        },
    ));

    out.push(run_check(
        "cache-stability",
        params(json!({ "len": b.fixed_point_len })),
        |v| {
            let short = pd.pd_prefix(b.fixed_point_len)?;
            let long = pd.pd_prefix(2 * b.fixed_point_len)?;
            if !short.is_prefix_of(&long) {
                let i = first_difference(short.letters(), long.letters());
                v.push(json!({ "position": i }));
            }
            Ok(())
        },
    ));

    out.push(run_check(
        "block-identities",
        params(json!({ "m_max": b.identity_order })),
        |v| {
            let (mut a, mut bb) = (block_a(0)?, block_b(0)?);
            let mut product = Word::from(Letter::A);
            for m in 0..=b.identity_order {
                if a != product {
                    v.push(json!({ "identity": "product", "m": m }));
                }
                if strip_last(&a)? != strip_last(&bb)? {
                    v.push(json!({ "identity": "last-letter", "m": m }));
                }
                if a.last() != Some(delta(m)) || bb.last() != Some(delta(m + 1)) {
                    v.push(json!({ "identity": "parity", "m": m, "a_last": a.last(), "b_last": bb.last() }));
                }
                let next_a = block_a(m + 1)?;
                let next_b = block_b(m + 1)?;
                if next_a != concat(&a, &bb) || next_b != concat(&a, &a) {
                    v.push(json!({ "identity": "recursion", "m": m }));
                }
                product.extend_from(&bb);
                a = next_a;
                bb = next_b;
            }
            Ok(())
        },
    ));

    out.push(run_check(
        "power-free",
        params(json!({ "len": b.power_free_len, "theta_len": b.power_free_len / 2 })),
        |v| {
            for (source, len) in [
                (Source::D, b.power_free_len),
                (Source::Theta1, b.power_free_len / 2),
            ] {
                let hit = pd.with_prefix(source, len, |w| {
                    w.windows(4).position(|q| q.iter().all(|&l| l == q[0]))
                })?;
                if let Some(i) = hit {
                    v.push(json!({ "source": source, "position": i + 1 }));
                }
            }
            Ok(())
        },
    ));

    out.push(run_check(
        "block-occurrences-a",
        params(json!({ "m_max": b.block_occurrence_order })),
        |v| {
            for m in 0..=b.block_occurrence_order {
                let (a, bb) = (block_a(m)?, block_b(m)?);
                let len = 1usize << m;
                for (text, expected) in [
                    (cat(&[&a, &a]), vec![1, len + 1]),
                    (cat(&[&a, &bb, &a]), vec![1, 2 * len + 1]),
                ] {
                    let found = find_occurrences(&a, &text)?;
                    if found != expected {
                        v.push(
                            json!({ "m": m, "text": text, "expected": expected, "found": found }),
                        );
                    }
                }
            }
            Ok(())
        },
    ));

    out.push(run_check(
        "block-occurrences-b",
        params(json!({ "m_max": b.block_occurrence_order })),
        |v| {
            for m in 0..=b.block_occurrence_order {
                let (a, bb) = (block_a(m)?, block_b(m)?);
                let len = 1usize << m;
                let mut cases = vec![(cat(&[&a, &bb]), vec![len + 1])];
                if m >= 1 {
                    cases.push((cat(&[&bb, &a, &bb]), vec![1, len / 2 + 1, 2 * len + 1]));
                    cases.push((
                        cat(&[&bb, &a, &a, &a, &bb]),
                        vec![1, len / 2 + 1, 4 * len + 1],
                    ));
                }
                for (text, expected) in cases {
                    let found = find_occurrences(&bb, &text)?;
                    if found != expected {
                        v.push(
                            json!({ "m": m, "text": text, "expected": expected, "found": found }),
                        );
                    }
                }
            }
            Ok(())
        },
    ));

    out.push(run_check(
        "envelope-recursion",
        params(json!({ "m_max": b.envelope_order })),
        |v| {
            for m in 1..b.envelope_order {
                let e = envelope_word(Kind::One, m)?.word;
                let d = Word::from(delta(m));
                let once = cat(&[&e, &d, &e]);
                let twice = cat(&[&once, &d, &e]);
                if envelope_word(Kind::One, m + 1)?.word != once {
                    v.push(json!({ "kind": 1, "m": m + 1 }));
                }
                if envelope_word(Kind::Two, m + 1)?.word != twice {
                    v.push(json!({ "kind": 2, "m": m + 1 }));
                }
            }
            Ok(())
        },
    ));

    out.push(run_check(
        "envelope-palindromes",
        params(json!({ "m_max": b.envelope_order })),
        |v| {
            for m in 1..=b.envelope_order {
                for kind in [Kind::One, Kind::Two] {
                    let e = envelope_word(kind, m)?;
                    if !is_palindrome(&e.word) {
                        v.push(json!({ "kind": kind, "m": m }));
                    }
                }
            }
            Ok(())
        },
    ));

    out.push(run_check(
        "envelope-first-letters",
        params(json!({ "m_max": b.envelope_order })),
        |v| {
            for m in 2..=b.envelope_order {
                let e = envelope_word(Kind::One, m)?.word;
                let ok = e.at(1) == Some(Letter::A)
                    && e.at(2) == Some(Letter::B)
                    && e.last() == Some(Letter::A);
                if !ok {
                    v.push(json!({ "m": m, "start": e.slice(1, 2), "end": e.last() }));
                }
            }
            Ok(())
        },
    ));

    out.push(run_check(
        "separator-words",
        params(json!({ "m_max": b.separator_order })),
        |v| {
            for kind in [Kind::One, Kind::Two] {
                for m in 2..=b.separator_order {
                    let target = envelope_word(kind, m)?.word;
                    for n in 1..m {
                        let block = e1(n)?;
                        let mut rebuilt = block.clone();
                        for &x in separator_word(kind, m, n)?.letters() {
                            rebuilt.push(x);
                            rebuilt.extend_from(&block);
                        }
                        if rebuilt != target {
                            v.push(json!({ "kind": kind, "m": m, "n": n }));
                        }
                    }
                }
            }
            Ok(())
        },
    ));

    out.push(run_check(
        "palindromic-prefixes",
        params(json!({ "m_max": b.palindrome_prefix_order })),
        |v| {
            for m in 1..=b.palindrome_prefix_order {
                let allowed: BTreeSet<usize> = (1..=m).map(|n| (1usize << n) - 1).collect();
                let first = envelope_word(Kind::One, m)?.word;
                for (side, lens) in palindromic_ends(&first) {
                    if lens != allowed {
                        v.push(json!({ "kind": 1, "m": m, "side": side, "lengths": lens }));
                    }
                }
                // proper ones only for the second kind
                let second = envelope_word(Kind::Two, m)?.word;
                for (side, lens) in palindromic_ends(&second) {
                    let stray: Vec<_> = lens
                        .iter()
                        .filter(|&&l| l < second.len() && !allowed.contains(&l))
                        .collect();
                    if !stray.is_empty() {
                        v.push(json!({ "kind": 2, "m": m, "side": side, "lengths": stray }));
                    }
                }
            }
            Ok(())
        },
    ));

    out.push(run_check(
        "palindrome-classification",
        params(json!({ "order_max": b.classification_order })),
        |v| {
            let top = b.classification_order;
            for m in 1..=top {
                let d = Word::from(delta(m));
                for n in 1..=top {
                    for k in 1..=top {
                        let w = cat(&[&e1(n)?, &d, &e1(k)?]);
                        let predicted = n == k || (n.abs_diff(k) == 1 && m % 2 == n.min(k) % 2);
                        if is_palindrome(&w) != predicted {
                            v.push(json!({ "shape": "single", "n": n, "m": m, "k": k }));
                        }
                        if n < m && k < m {
                            let w = cat(&[&e1(n)?, &d, &e1(m)?, &d, &e1(k)?]);
                            if is_palindrome(&w) != (n == k) {
                                v.push(json!({ "shape": "double", "n": n, "m": m, "k": k }));
                            }
                        }
                    }
                }
            }
            Ok(())
        },
    ));

    for rule in &CONTEXT_RULES {
        out.push(run_check(
            rule.id,
            params(json!({
                "pattern": rule.pattern,
                "len": b.context_len,
                "m_min": rule.m_min,
                "m_max": b.context_order,
            })),
            |v| {
                for m in rule.m_min..=b.context_order.max(rule.m_min) {
                    check_context(pd, rule, m, b.context_len, v)?;
                }
                Ok(())
            },
        ));
    }

    out.push(run_check(
        "coded-blocks",
        params(json!({ "order_max": b.coded_order })),
        |v| {
            for m in 1..=b.coded_order {
                for kind in [Kind::One, Kind::Two] {
                    let (letter_a, letter_b) = coded_block(pd, kind, m, 0)?;
                    let coding = Morphism::new(letter_a, letter_b);
                    for n in 0..=b.coded_order {
                        let (want_a, want_b) = coded_block(pd, kind, m, n)?;
                        if coding.apply(&block_a(n)?)? != want_a
                            || coding.apply(&block_b(n)?)? != want_b
                        {
                            v.push(json!({ "kind": kind, "m": m, "n": n }));
                        }
                    }
                }
            }
            Ok(())
        },
    ));

    out
}

/// Lengths of the palindromic prefixes and suffixes of `w`.
fn palindromic_ends(w: &Word) -> [(&'static str, BTreeSet<usize>); 2] {
    let n = w.len();
    let prefixes = (1..=n).filter(|&l| is_palindrome(&w.slice(1, l))).collect();
    let suffixes = (1..=n)
        .filter(|&l| is_palindrome(&w.slice(n - l + 1, n)))
        .collect();
    [("prefix", prefixes), ("suffix", suffixes)]
}

/// A word `δ_x E_{1,m-j} δ_y` together with the words that must always
/// precede and follow it in `D`.
struct ContextRule {
    id: &'static str,
    pattern: &'static str,
    m_min: u32,
    #[allow(clippy::type_complexity)]
    build: fn(u32) -> Result<(Word, Word, Word)>,
}

const CONTEXT_RULES: [ContextRule; 4] = [
    ContextRule {
        id: "context-outer-inner",
        pattern: "δ_m E_{1,m-2} δ_{m-1}",
        m_min: 3,
        build: |m| {
            let core = cat(&[&delta(m).into(), &e1(m - 2)?, &delta(m - 1).into()]);
            Ok((e1(m - 2)?, core, e1(m - 1)?))
        },
    },
    ContextRule {
        id: "context-inner-inner",
        pattern: "δ_{m-1} E_{1,m-2} δ_{m-1}",
        m_min: 3,
        build: |m| {
            let d_m = Word::from(delta(m));
            let core = cat(&[&delta(m - 1).into(), &e1(m - 2)?, &delta(m - 1).into()]);
            let before = cat(&[&e1(m - 2)?, &d_m, &e1(m - 3)?]);
            let after = cat(&[&e1(m - 3)?, &d_m, &e1(m - 2)?]);
            Ok((before, core, after))
        },
    },
    ContextRule {
        id: "context-inner-outer",
        pattern: "δ_{m-1} E_{1,m-2} δ_m",
        m_min: 3,
        build: |m| {
            let core = cat(&[&delta(m - 1).into(), &e1(m - 2)?, &delta(m).into()]);
            Ok((e1(m - 1)?, core, e1(m - 2)?))
        },
    },
    ContextRule {
        id: "context-central",
        pattern: "δ_{m-1} E_{1,m-1} δ_{m-1}",
        m_min: 2,
        build: |m| {
            let core = cat(&[&delta(m - 1).into(), &e1(m - 1)?, &delta(m - 1).into()]);
            Ok((e1(m - 1)?, core, e1(m - 1)?))
        },
    },
];

fn check_context(
    pd: &PeriodDoubling,
    rule: &ContextRule,
    m: u32,
    len: usize,
    v: &mut super::Violations,
) -> Result<()> {
    let (before, core, after) = (rule.build)(m)?;
    let matcher = Matcher::new(&core)?;
    pd.with_prefix(Source::D, len, |d| {
        let mut checked = 0;
        for q in matcher.find_all(d) {
            let start = q - 1;
            let end = start + core.len();
            if start < before.len() || end + after.len() > d.len() {
                continue;
            }
            checked += 1;
            let left = &d[start - before.len()..start];
            let right = &d[end..end + after.len()];
            if left != before.letters() || right != after.letters() {
                v.push(json!({
                    "m": m, "position": q,
                    "before": Word::from(left), "after": Word::from(right),
                    "expected_before": before, "expected_after": after,
                }));
            }
        }
        if checked == 0 {
            v.push(json!({ "m": m, "pattern": core, "error": "no occurrence with room on both sides" }));
        }
    })
}
