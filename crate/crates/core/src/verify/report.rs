use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub params: Map<String, Value>,
    pub status: Status,
    /// Concrete words and positions that violate the check; present iff failed.
    pub counterexample: Option<Value>,
    pub elapsed_ms: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Sweep parameters. `jobs` only affects scheduling and is left out of the
/// serialized report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Longest factor enumerated.
    pub len_max: usize,
    /// Return words / occurrences examined per factor.
    pub count: usize,
    /// Largest envelope order for the envelope and structure suites.
    pub m_max: u32,
    #[serde(skip)]
    pub jobs: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            len_max: 32,
            count: 64,
            m_max: 12,
            jobs: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config: SweepConfig,
    pub results: Vec<CheckResult>,
    pub totals: Totals,
}

impl VerificationReport {
    pub fn new(config: SweepConfig, results: Vec<CheckResult>) -> Self {
        let fail = results.iter().filter(|r| !r.passed()).count();
        let totals = Totals {
            pass: results.len() - fail,
            fail,
        };
        VerificationReport {
            config,
            results,
            totals,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.totals.fail == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| !r.passed())
    }

    pub fn total_elapsed(&self) -> Duration {
        Duration::from_secs_f64(self.results.iter().map(|r| r.elapsed_ms).sum::<f64>() / 1e3)
    }

    /// Zeroes every timing field so two reports can be compared byte for byte.
    pub fn strip_timings(&mut self) {
        for r in &mut self.results {
            r.elapsed_ms = 0.0;
        }
    }
}
