//! Configuration ingestion, suite orchestration, and deterministic report
//! emission. Every check run by a suite becomes one [`Record`] carrying a
//! stable anchor string, the measured number, the bound it was held
//! against, and the verdict; reports serialize to JSON (stable key order)
//! or CSV (`check,anchor,measured,bound,pass`).

mod config;
mod emit;
mod suites;

pub use config::{
    load_config, load_config_str, ContinuityParams, CoreParams, GalleryParams, KgParams,
    OutputFormat, ProbeParams, SuiteConfig, SuiteName, ToleranceTable,
};
pub use emit::{emit_report, parse_report};
pub use suites::{run_suite, suite_records, AuxTable, SuiteOutput};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config value: {0}")]
    InvalidValue(String),
    #[error("unsupported output format: {0}")]
    UnsupportedFormat(String),
    #[error("suite error: {0}")]
    Suite(String),
}

/// One executed check.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Record {
    pub name: String,
    /// Stable identifier of the claim this record verifies.
    pub anchor: String,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
    /// Soft records are reported data; they never affect the exit code.
    pub soft: bool,
}

impl Record {
    /// A hard check: passes iff measured ≤ bound.
    pub fn hard(
        name: impl Into<String>,
        anchor: impl Into<String>,
        measured: f64,
        bound: f64,
    ) -> Self {
        Record {
            name: name.into(),
            anchor: anchor.into(),
            measured,
            bound,
            pass: measured <= bound && measured.is_finite(),
            soft: false,
        }
    }

    /// A soft (informational) check, labeled pass/fail against its bound
    /// but excluded from the exit-code contract.
    pub fn soft(
        name: impl Into<String>,
        anchor: impl Into<String>,
        measured: f64,
        bound: f64,
    ) -> Self {
        Record {
            name: name.into(),
            anchor: anchor.into(),
            measured,
            bound,
            pass: measured <= bound && measured.is_finite(),
            soft: true,
        }
    }

    /// A hard check that failed on an error path, recorded rather than
    /// crashing the suite.
    pub fn failure(name: impl Into<String>, anchor: impl Into<String>, message: &str) -> Self {
        Record {
            name: format!("{} [{message}]", name.into()),
            anchor: anchor.into(),
            measured: f64::NAN,
            bound: 0.0,
            pass: false,
            soft: false,
        }
    }

    pub fn violation(&self) -> f64 {
        self.measured - self.bound
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub soft_records: usize,
    pub soft_failed: usize,
    /// Largest measured-minus-bound over hard records.
    pub max_violation: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Header {
    pub artifact: String,
    pub version: String,
    pub suite: String,
    pub seed: u64,
    /// Tolerances in force, echoed so reports are self-describing.
    pub tolerances: ToleranceTable,
    /// Configuration echo (canonical JSON of the validated config).
    pub config_echo: String,
    /// Wall-clock timestamp (the only field allowed to differ between
    /// identical runs).
    pub generated_at: String,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub header: Header,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    pub fn assemble(header: Header, mut records: Vec<Record>) -> Report {
        records.sort_by(|a, b| a.name.cmp(&b.name));
        let total = records.len();
        let hard_total = records.iter().filter(|r| !r.soft).count();
        let passed = records.iter().filter(|r| !r.soft && r.pass).count();
        let failed = hard_total - passed;
        let soft_records = total - hard_total;
        let soft_failed = records.iter().filter(|r| r.soft && !r.pass).count();
        let max_violation = records
            .iter()
            .filter(|r| !r.soft)
            .map(|r| r.violation())
            .fold(f64::NEG_INFINITY, f64::max);
        Report {
            header,
            records,
            summary: Summary {
                total,
                passed,
                failed,
                soft_records,
                soft_failed,
                max_violation,
            },
        }
    }

    pub fn all_hard_passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// The stdout summary block (the full report body goes to files only).
    pub fn summary_block(&self) -> String {
        format!(
            "suite: {}\nseed: {}\nrecords: {} total, {} passed, {} failed ({} soft, {} soft-flagged)\nmax violation (hard): {:.3e}\nelapsed: {:.2}s\nstatus: {}\n",
            self.header.suite,
            self.header.seed,
            self.summary.total,
            self.summary.passed,
            self.summary.failed,
            self.summary.soft_records,
            self.summary.soft_failed,
            self.summary.max_violation,
            self.header.elapsed_seconds,
            if self.all_hard_passed() { "PASS" } else { "FAIL" }
        )
    }
}
