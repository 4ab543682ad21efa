use serde_json::json;

use super::{factors_up_to, par_map, params, run_check, CheckResult, Violations};
use crate::envelope::{env, env_extension, envelope_word, inner_envelope, EnvelopeWord};
use crate::error::Result;
use crate::returns::{
    decompose, envelope_return_words, occurrences, predicted_decomposition, predicted_positions,
    return_lengths, return_words, slots, split_returns, OccurrenceStream,
};
use crate::sequence::{Kind, PeriodDoubling};
use crate::words::{find_occurrences, Word};

/// First occurrence positions of `E_{kind,m}` in closed form.
fn leading_positions(kind: Kind, m: u32) -> Vec<usize> {
    let half = 1usize << (m - 1);
    match kind {
        Kind::One => vec![1, 2 * half + 1, 3 * half + 1],
        Kind::Two => vec![
            2 * half + 1,
            3 * half + 1,
            10 * half + 1,
            11 * half + 1,
            14 * half + 1,
        ],
    }
}

type Scan = (OccurrenceStream, Word, Vec<Word>);

fn scan(pd: &PeriodDoubling, w: &Word, count: usize) -> Result<Scan> {
    let stream = occurrences(pd, w, count)?;
    let (r0, returns) = split_returns(pd, &stream)?;
    Ok((stream, r0, returns))
}

fn envelope_json(e: &EnvelopeWord) -> serde_json::Value {
    json!({ "kind": e.kind, "m": e.order, "word": e.word })
}

/// Scans the return words of `E_{kind,m}` for `1 <= m <= m_max` and compares
/// them with the `Θ_kind` coding over the closed-form alphabet, the closed-form
/// leading positions, and the closed-form return-word lengths.
pub fn verify_envelope_returns(
    pd: &PeriodDoubling,
    kind: Kind,
    m_max: u32,
    count: usize,
) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for m in 1..=m_max {
        let p = params(json!({ "kind": kind, "m": m, "count": count }));
        let scanned = envelope_word(kind, m).and_then(|e| scan(pd, &e.word, count));

        out.push(run_check("envelope-returns", p.clone(), |v| {
            let (stream, r0, returns) = scanned.clone()?;
            let (expected_r0, alphabet) = envelope_return_words(pd, kind, m)?;
            if r0 != expected_r0 {
                v.push(json!({ "what": "r0", "expected": expected_r0, "found": r0 }));
            }
            let theta = pd.theta_prefix(kind, count)?;
            for (i, (r, code)) in returns.iter().zip(theta.letters()).enumerate() {
                if *r != alphabet[code] {
                    v.push(
                        json!({ "p": i + 1, "code": code, "expected": alphabet[code], "found": r }),
                    );
                }
            }
            let mut found = stream.positions.clone();
            found.push(stream.next);
            for (i, (&want, &got)) in leading_positions(kind, m).iter().zip(&found).enumerate() {
                if want != got {
                    v.push(
                        json!({ "what": "position", "p": i + 1, "expected": want, "found": got }),
                    );
                }
            }
            Ok(())
        }));

        out.push(run_check("return-lengths", p, |v| {
            let (_, r0, returns) = scanned.clone()?;
            let lengths = return_lengths(kind, m, 0);
            if r0.len() != lengths.r0 {
                v.push(json!({ "p": 0, "expected": lengths.r0, "found": r0.len() }));
            }
            let theta = pd.theta_prefix(kind, count)?;
            for (i, (r, code)) in returns.iter().zip(theta.letters()).enumerate() {
                if r.len() != lengths.by_letter[code] {
                    v.push(json!({ "p": i + 1, "expected": lengths.by_letter[code], "found": r.len() }));
                }
            }
            Ok(())
        }));
    }
    out
}

pub(crate) fn extension_checks(pd: &PeriodDoubling, w: &Word, count: usize) -> Vec<CheckResult> {
    let p = params(json!({ "factor": w, "count": count }));
    let located = env(pd, w).and_then(|e| {
        let hits = find_occurrences(w, &e.word)?;
        Ok((e, hits))
    });

    let unique = run_check("unique-extension", p.clone(), |v| {
        let (e, hits) = located.clone()?;
        if hits.len() != 1 {
            v.push(json!({ "factor": w, "envelope": envelope_json(&e), "positions": hits }));
        }
        Ok(())
    });

    let strong = run_check("strong-extension", p, |v| {
        let (e, hits) = located.clone()?;
        let Some(&first) = hits.first() else {
            v.push(json!({ "factor": w, "envelope": envelope_json(&e), "positions": hits }));
            return Ok(());
        };
        let mu1_len = first - 1;
        let own = occurrences(pd, w, count)?.positions;
        let outer = occurrences(pd, &e.word, count)?.positions;
        for (i, (&a, &b)) in own.iter().zip(&outer).enumerate() {
            if a != b + mu1_len {
                v.push(json!({
                    "factor": w, "p": i + 1, "position": a,
                    "envelope_position": b, "mu1_len": mu1_len,
                }));
            }
        }
        Ok(())
    });

    vec![unique, strong]
}

fn compare_decompositions(
    v: &mut Violations,
    w: &Word,
    scanned: &crate::returns::ReturnDecomposition,
    predicted: &crate::returns::ReturnDecomposition,
) {
    if scanned.r0 != predicted.r0 {
        v.push(
            json!({ "factor": w, "field": "r0", "scanned": scanned.r0, "predicted": predicted.r0 }),
        );
    }
    for (i, (s, q)) in scanned.returns.iter().zip(&predicted.returns).enumerate() {
        if s != q {
            v.push(json!({ "factor": w, "field": "returns", "p": i + 1, "scanned": s, "predicted": q }));
        }
    }
    if scanned.returns.len() != predicted.returns.len() {
        v.push(json!({
            "factor": w, "field": "returns.len",
            "scanned": scanned.returns.len(), "predicted": predicted.returns.len(),
        }));
    }
    if scanned.coded != predicted.coded {
        v.push(json!({ "factor": w, "field": "coded", "scanned": scanned.coded, "predicted": predicted.coded }));
    }
    if scanned.classification != predicted.classification {
        v.push(json!({
            "factor": w, "field": "classification",
            "scanned": scanned.classification, "predicted": predicted.classification,
        }));
    }
    if scanned.alphabet != predicted.alphabet {
        v.push(json!({
            "factor": w, "field": "alphabet",
            "scanned": scanned.alphabet, "predicted": predicted.alphabet,
        }));
    }
}

pub(crate) fn general_checks(pd: &PeriodDoubling, w: &Word, count: usize) -> Vec<CheckResult> {
    let p = params(json!({ "factor": w, "count": count }));

    let returns = run_check("factor-returns", p.clone(), |v| {
        let scanned = decompose(pd, w, count)?;
        let predicted = predicted_decomposition(pd, w, count)?;
        compare_decompositions(v, w, &scanned, &predicted);
        let positions = occurrences(pd, w, count)?.positions;
        let predicted_at = predicted_positions(pd, w, count)?;
        for (i, (a, b)) in positions.iter().zip(&predicted_at).enumerate() {
            if a != b {
                v.push(json!({ "factor": w, "field": "positions", "p": i + 1, "scanned": a, "predicted": b }));
            }
        }
        Ok(())
    });

    let lengths = run_check("return-lengths", p.clone(), |v| {
        let ext = env_extension(pd, w)?;
        let kind = ext.envelope.kind;
        let expected = return_lengths(kind, ext.envelope.order, ext.mu1.len());
        let (r0, rs) = return_words(pd, w, count)?;
        if r0.len() != expected.r0 {
            v.push(json!({ "factor": w, "p": 0, "expected": expected.r0, "found": r0.len() }));
        }
        let theta = pd.theta_prefix(kind, count)?;
        for (i, (r, code)) in rs.iter().zip(theta.letters()).enumerate() {
            if r.len() != expected.by_letter[code] {
                v.push(json!({ "factor": w, "p": i + 1, "expected": expected.by_letter[code], "found": r.len() }));
            }
        }
        Ok(())
    });

    let distinct = run_check("distinct-return-words", p.clone(), |v| {
        let kind = env(pd, w)?.kind;
        let (_, rs) = return_words(pd, w, count)?;
        let mut seen = rs.clone();
        seen.sort();
        seen.dedup();
        let expected = slots(kind).iter().filter(|&&(_, p)| p <= count).count();
        if seen.len() != expected {
            v.push(
                json!({ "factor": w, "expected": expected, "found": seen.len(), "words": seen }),
            );
        }
        Ok(())
    });

    let rebuilt = run_check("return-concatenation", p.clone(), |v| {
        let stream = occurrences(pd, w, count)?;
        let (r0, rs) = split_returns(pd, &stream)?;
        let mut glued = r0;
        for r in &rs {
            glued.extend_from(r);
        }
        glued.extend_from(w);
        let expected = pd.pd_prefix(stream.next + w.len() - 1)?;
        if glued != expected {
            let at = glued
                .letters()
                .iter()
                .zip(expected.letters())
                .position(|(x, y)| x != y);
            v.push(json!({
                "factor": w, "len": glued.len(), "expected_len": expected.len(),
                "first_difference": at.map(|i| i + 1),
            }));
        }
        Ok(())
    });

    let inner = run_check("inner-envelope", p, |_| inner_envelope(pd, w).map(|_| ()));

    vec![returns, lengths, distinct, rebuilt, inner]
}

fn per_factor(
    pd: &PeriodDoubling,
    len_max: usize,
    count: usize,
    jobs: usize,
    checks: impl Fn(&PeriodDoubling, &Word, usize) -> Vec<CheckResult> + Sync,
) -> Vec<CheckResult> {
    match factors_up_to(pd, len_max) {
        Ok(factors) => par_map(&factors, jobs, |w| checks(pd, w, count))
            .into_iter()
            .flatten()
            .collect(),
        Err(e) => vec![run_check(
            "factor-enumeration",
            params(json!({ "len_max": len_max })),
            |_| Err(e),
        )],
    }
}

/// For every factor up to `len_max`: it occurs once in its envelope, and its
/// `p`-th occurrence sits `|μ1|` after the envelope's `p`-th occurrence.
pub fn verify_extension(pd: &PeriodDoubling, len_max: usize, count: usize) -> Vec<CheckResult> {
    per_factor(pd, len_max, count, 1, extension_checks)
}

/// For every factor up to `len_max`: scanned and predicted decompositions
/// agree, lengths match the closed forms, the number of distinct return
/// words is 2 or 3, and the inner envelope word is present.
pub fn verify_general(pd: &PeriodDoubling, len_max: usize, count: usize) -> Vec<CheckResult> {
    per_factor(pd, len_max, count, 1, general_checks)
}
