//! Executable checks of the structural statements about `D`, its envelope
//! words and return words, collected into a machine-readable report.
//!
//! Every check compares a scan of the actual sequence against a closed form
//! or an independent construction. A failing check never stops a suite: it
//! becomes a result carrying the concrete words and positions involved.

mod factors;
mod report;
mod structure;
mod suites;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::Result;
use crate::sequence::{Kind, PeriodDoubling};

pub use factors::factors_up_to;
pub use report::{CheckResult, Status, SweepConfig, Totals, VerificationReport};
pub use structure::{verify_structure, verify_structure_with, StructureBounds};
pub use suites::{verify_envelope_returns, verify_extension, verify_general};

const MAX_LISTED_VIOLATIONS: usize = 16;

#[derive(Default)]
pub(crate) struct Violations {
    listed: Vec<Value>,
    count: usize,
}

impl Violations {
    pub(crate) fn push(&mut self, witness: Value) {
        self.count += 1;
        if self.listed.len() < MAX_LISTED_VIOLATIONS {
            self.listed.push(witness);
        }
    }

    fn into_counterexample(self) -> Option<Value> {
        (self.count > 0).then(|| json!({ "count": self.count, "violations": self.listed }))
    }
}

pub(crate) fn params(value: Value) -> Map<String, Value> {
    match value {
        Value::Object(map) => map,
        other => panic!("params must be an object, got {other}"),
    }
}

/// Runs `body`, turning recorded violations or a library error into a failure.
pub(crate) fn run_check(
    check_id: &str,
    params: Map<String, Value>,
    body: impl FnOnce(&mut Violations) -> Result<()>,
) -> CheckResult {
    let watch = Stopwatch::start();
    let mut violations = Violations::default();
    if let Err(e) = body(&mut violations) {
        violations.push(json!({ "error": e.to_string() }));
    }
    let counterexample = violations.into_counterexample();
    CheckResult {
        check_id: check_id.to_string(),
        params,
        status: if counterexample.is_some() {
            Status::Fail
        } else {
            Status::Pass
        },
        counterexample,
        elapsed_ms: watch.elapsed_ms(),
    }
}

struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    fn start() -> Self {
        Stopwatch {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    // no monotonic clock on wasm32-unknown-unknown
    fn elapsed_ms(&self) -> f64 {
        #[cfg(not(target_arch = "wasm32"))]
        return self.start.elapsed().as_secs_f64() * 1e3;
        #[cfg(target_arch = "wasm32")]
        return 0.0;
    }
}

/// Maps `f` over `items` on `jobs` workers, keeping input order.
pub(crate) fn par_map<T: Sync, R: Send>(
    items: &[T],
    jobs: usize,
    f: impl Fn(&T) -> R + Sync,
) -> Vec<R> {
    if jobs <= 1 {
        return items.iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

/// Runs every suite and assembles the report.
///
/// Result order is fixed: structure checks, envelope suites by kind and
/// order, then per-factor checks by (factor, check id). It does not depend
/// on `config.jobs`.
pub fn sweep(pd: &PeriodDoubling, config: SweepConfig) -> VerificationReport {
    let mut results = verify_structure(pd, config.m_max);
    for kind in [Kind::One, Kind::Two] {
        results.extend(verify_envelope_returns(
            pd,
            kind,
            config.m_max,
            config.count,
        ));
    }
    match factors_up_to(pd, config.len_max) {
        Ok(factors) => {
            let per_factor = par_map(&factors, config.jobs, |w| {
                let mut checks = suites::extension_checks(pd, w, config.count);
                checks.extend(suites::general_checks(pd, w, config.count));
                checks.sort_by(|a, b| a.check_id.cmp(&b.check_id));
                checks
            });
            results.extend(per_factor.into_iter().flatten());
        }
        Err(e) => results.push(run_check(
            "factor-enumeration",
            params(json!({ "len_max": config.len_max })),
            |_| Err(e),
        )),
    }
    VerificationReport::new(config, results)
}

/// Distinct check ids in a result list, in order of first appearance.
pub fn check_ids(results: &[CheckResult]) -> Vec<String> {
    let mut seen = BTreeSet::new();
    results
        .iter()
        .filter(|r| seen.insert(r.check_id.clone()))
        .map(|r| r.check_id.clone())
        .collect()
}
