//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export takes plain strings and numbers and returns a JSON string, so
//! the page needs no generated TypeScript types. The `*_json` functions hold
//! the logic and are what the native tests call.

use std::sync::OnceLock;

use pdwords::verify::{sweep, SweepConfig};
use pdwords::{
    decompose, env_extension, occurrences, Classification, Kind, Limits, PeriodDoubling, Word,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Browser-sized caps: 4 Mi letters per cached sequence, at most 512 return
/// words, factors of at most 256 letters.
const MAX_SEQ: usize = 1 << 22;
const MAX_COUNT: usize = 512;
const MAX_FACTOR: usize = 256;

fn pd() -> &'static PeriodDoubling {
    static PD: OnceLock<PeriodDoubling> = OnceLock::new();
    PD.get_or_init(|| {
        PeriodDoubling::new(Limits {
            max_len: MAX_SEQ,
            max_count: MAX_COUNT,
            ..Limits::default()
        })
    })
}

fn parse_factor(s: &str) -> Result<Word, String> {
    let w: Word = s
        .trim()
        .parse()
        .map_err(|e: pdwords::Error| e.to_string())?;
    if w.len() > MAX_FACTOR {
        return Err(format!("factor is longer than {MAX_FACTOR} letters"));
    }
    Ok(w)
}

#[derive(Serialize)]
struct Extension {
    factor: Word,
    kind: Kind,
    m: u32,
    envelope: Word,
    mu1: Word,
    mu2: Word,
}

#[derive(Serialize)]
struct Returns {
    factor: Word,
    kind: Kind,
    m: u32,
    mu1: Word,
    r0: Word,
    returns: Vec<Word>,
    coded: Word,
    classification: Classification,
    positions: Vec<usize>,
    distinct: Vec<Word>,
}

#[derive(Serialize)]
struct SweepSummary {
    checks: usize,
    pass: usize,
    fail: usize,
    by_check: Vec<(String, usize, usize)>,
    failures: Vec<serde_json::Value>,
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

/// `Env(factor)` and the unique split `μ1 · factor · μ2` of it.
pub fn envelope_json(factor: &str) -> Result<String, String> {
    let w = parse_factor(factor)?;
    let ext = env_extension(pd(), &w).map_err(|e| e.to_string())?;
    to_json(&Extension {
        factor: ext.factor,
        kind: ext.envelope.kind,
        m: ext.envelope.order,
        envelope: ext.envelope.word,
        mu1: ext.mu1,
        mu2: ext.mu2,
    })
}

/// The first `count` return words of `factor`, their coding and positions.
pub fn returns_json(factor: &str, count: usize) -> Result<String, String> {
    let w = parse_factor(factor)?;
    let d = decompose(pd(), &w, count).map_err(|e| e.to_string())?;
    let ext = env_extension(pd(), &w).map_err(|e| e.to_string())?;
    let positions = occurrences(pd(), &w, count)
        .map_err(|e| e.to_string())?
        .positions;
    let mut distinct = d.returns.clone();
    distinct.sort();
    distinct.dedup();
    to_json(&Returns {
        factor: d.factor,
        kind: ext.envelope.kind,
        m: ext.envelope.order,
        mu1: ext.mu1,
        r0: d.r0,
        returns: d.returns,
        coded: d.coded,
        classification: d.classification,
        positions,
        distinct,
    })
}

/// A small verification sweep, summarized per check id.
pub fn sweep_json(len_max: usize, count: usize, m_max: u32) -> Result<String, String> {
    if len_max == 0 || len_max > 16 || count == 0 || count > 128 || !(1..=10).contains(&m_max) {
        return Err("keep 1 <= len_max <= 16, 1 <= count <= 128, 1 <= m_max <= 10".into());
    }
    let report = sweep(
        pd(),
        SweepConfig {
            len_max,
            count,
            m_max,
            jobs: 1,
        },
    );
    let mut by_check: Vec<(String, usize, usize)> = Vec::new();
    for c in &report.results {
        let row = match by_check.iter_mut().find(|(id, _, _)| *id == c.check_id) {
            Some(row) => row,
            None => {
                by_check.push((c.check_id.clone(), 0, 0));
                by_check.last_mut().expect("just pushed")
            }
        };
        if c.passed() {
            row.1 += 1;
        } else {
            row.2 += 1;
        }
    }
    let failures = report
        .failures()
        .take(20)
        .map(|c| serde_json::json!({ "check_id": c.check_id, "params": c.params, "counterexample": c.counterexample }))
        .collect();
    to_json(&SweepSummary {
        checks: report.results.len(),
        pass: report.totals.pass,
        fail: report.totals.fail,
        by_check,
        failures,
    })
}

#[wasm_bindgen]
pub fn envelope(factor: &str) -> Result<String, JsError> {
    envelope_json(factor).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn returns(factor: &str, count: u32) -> Result<String, JsError> {
    returns_json(factor, count as usize).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn verify(len_max: u32, count: u32, m_max: u32) -> Result<String, JsError> {
    sweep_json(len_max as usize, count as usize, m_max).map_err(|e| JsError::new(&e))
}

/// The first `length` letters of `D` (capped at 4096 for display).
#[wasm_bindgen]
pub fn prefix(length: u32) -> Result<String, JsError> {
    let n = (length as usize).min(4096);
    pd().pd_prefix(n)
        .map(|w| w.to_string())
        .map_err(|e| JsError::new(&e.to_string()))
}
