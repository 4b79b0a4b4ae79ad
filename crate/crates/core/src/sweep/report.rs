use serde::Serialize;

use super::ConfigEcho;
use crate::error::Result;

pub const REPORT_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioStatus {
    Pass,
    Fail,
    Invalid,
}

impl ScenarioStatus {
    fn as_str(self) -> &'static str {
        match self {
            ScenarioStatus::Pass => "pass",
            ScenarioStatus::Fail => "fail",
            ScenarioStatus::Invalid => "invalid",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailureRecord {
    pub scenario: serde_json::Value,
    pub vector: Option<[u64; 2]>,
    pub expected_divisor: Option<u64>,
    pub value: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioRow {
    pub id: u64,
    pub status: ScenarioStatus,
    pub detail: String,
}

/// Aggregate results of one suite at one prime.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub prime: u64,
    pub total: u64,
    pub pass: u64,
    pub fail: u64,
    pub invalid: u64,
    pub failures: Vec<FailureRecord>,
    /// Per-scenario rows; emitted in CSV output only.
    #[serde(skip)]
    pub rows: Vec<ScenarioRow>,
}

impl SuiteOutcome {
    pub fn new(name: &str, prime: u64) -> Self {
        SuiteOutcome {
            name: name.to_string(),
            prime,
            total: 0,
            pass: 0,
            fail: 0,
            invalid: 0,
            failures: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn record(&mut self, id: u64, status: ScenarioStatus, detail: String, failure: Option<FailureRecord>) {
        self.total += 1;
        match status {
            ScenarioStatus::Pass => self.pass += 1,
            ScenarioStatus::Fail => self.fail += 1,
            ScenarioStatus::Invalid => self.invalid += 1,
        }
        self.failures.extend(failure);
        self.rows.push(ScenarioRow { id, status, detail });
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub version: String,
    pub config: ConfigEcho,
    pub suites: Vec<SuiteOutcome>,
    pub elapsed_ms: Option<u64>,
}

impl SweepReport {
    pub fn total_failures(&self) -> u64 {
        self.suites.iter().map(|s| s.fail).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_failures() == 0
    }

    /// Totals for one suite across all primes: `(total, pass, fail, invalid)`.
    pub fn suite_totals(&self, name: &str) -> (u64, u64, u64, u64) {
        self.suites
            .iter()
            .filter(|s| s.name == name)
            .fold((0, 0, 0, 0), |(t, p, f, i), s| (t + s.total, p + s.pass, f + s.fail, i + s.invalid))
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,prime,scenario,status,detail\n");
        for suite in &self.suites {
            for row in &suite.rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    suite.name,
                    suite.prime,
                    row.id,
                    row.status.as_str(),
                    csv_field(&row.detail)
                ));
            }
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
