use std::fmt;

use serde::Serialize;

use mfk_core::mcm::Report;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    /// The check could not run (engine error, cap hit).
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub id: String,
    pub outcome: Outcome,
    pub detail: String,
    pub wall_ms: u128,
}

impl Record {
    pub fn new(id: impl Into<String>, pass: bool, detail: impl Into<String>) -> Record {
        let outcome = if pass { Outcome::Pass } else { Outcome::Fail };
        Record { id: id.into(), outcome, detail: detail.into(), wall_ms: 0 }
    }

    pub fn error(id: impl Into<String>, detail: impl Into<String>) -> Record {
        Record { id: id.into(), outcome: Outcome::Error, detail: detail.into(), wall_ms: 0 }
    }

    /// One record per check of a core report.
    pub fn from_report(report: &Report) -> Vec<Record> {
        report
            .checks
            .iter()
            .map(|c| {
                let mut detail = c.detail.clone();
                if let Some(d) = c.discrepancies.first() {
                    detail = format!("{detail}; first difference at ({}, {}): {}", d.row, d.col, d.diff);
                }
                Record::new(format!("{} :: {}", report.id, c.name), c.pass, detail)
            })
            .collect()
    }

    pub fn pass(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub suite: String,
    pub engine_version: String,
    pub summary: Summary,
    pub records: Vec<Record>,
}

impl RunReport {
    pub fn new(suite: impl Into<String>, records: Vec<Record>) -> RunReport {
        let mut summary = Summary { total: records.len(), ..Summary::default() };
        for r in &records {
            match r.outcome {
                Outcome::Pass => summary.passed += 1,
                Outcome::Fail => summary.failed += 1,
                Outcome::Error => summary.errors += 1,
            }
        }
        RunReport { suite: suite.into(), engine_version: ENGINE_VERSION.to_string(), summary, records }
    }

    pub fn pass(&self) -> bool {
        self.summary.failed == 0 && self.summary.errors == 0
    }

    /// 0 all pass, 1 some check failed, 3 some check could not run.
    pub fn exit_code(&self) -> i32 {
        if self.summary.errors > 0 {
            3
        } else if self.summary.failed > 0 {
            1
        } else {
            0
        }
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            let tag = match r.outcome {
                Outcome::Pass => "PASS",
                Outcome::Fail => "FAIL",
                Outcome::Error => "ERROR",
            };
            writeln!(f, "[{tag}] {} ({})", r.id, r.detail)?;
        }
        let s = &self.summary;
        write!(
            f,
            "suite {}: {} checks, {} passed, {} failed, {} errors (engine {})",
            self.suite, s.total, s.passed, s.failed, s.errors, self.engine_version
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tallies() {
        let r = RunReport::new(
            "t",
            vec![Record::new("a", true, ""), Record::new("b", false, ""), Record::error("c", "boom")],
        );
        assert_eq!(r.summary, Summary { total: 3, passed: 1, failed: 1, errors: 1 });
        assert_eq!(r.exit_code(), 3);
        assert_eq!(RunReport::new("t", vec![Record::new("a", false, "")]).exit_code(), 1);
        assert_eq!(RunReport::new("t", vec![]).exit_code(), 0);
    }
}
