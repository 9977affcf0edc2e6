use std::fmt::Write as _;

use serde::Serialize;

use crate::config::{Suite, SuiteConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A negative control that failed, as it is supposed to.
    ExpectedFail,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::ExpectedFail => "XFAIL",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub suite: Suite,
    /// The statement being checked, or `"plumbing"` for infrastructure checks.
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub expected_fail: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub config: SuiteConfig,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    /// Sorts the records by id and tallies them.
    pub fn new(config: SuiteConfig, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let mut summary = Summary {
            total: checks.len(),
            ..Summary::default()
        };
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::ExpectedFail => summary.expected_fail += 1,
            }
        }
        Report {
            config,
            checks,
            summary,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn get(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in &self.checks {
            let _ = write!(
                out,
                "{:<5} {:<width$}  [{}] {}",
                c.status.label(),
                c.id,
                c.suite,
                c.anchor
            );
            if let Some(ms) = c.elapsed_ms {
                let _ = write!(out, " ({ms} ms)");
            }
            out.push('\n');
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "      witness: {w}");
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{} checks: {} passed, {} failed, {} expected failures",
            s.total, s.pass, s.fail, s.expected_fail
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(id: &str, status: Status) -> CheckRecord {
        CheckRecord {
            id: id.into(),
            suite: Suite::Weil,
            anchor: "anchor".into(),
            status,
            witness: (status != Status::Pass).then(|| "w".into()),
            elapsed_ms: None,
        }
    }

    #[test]
    fn tallies_and_sorts() {
        let r = Report::new(
            SuiteConfig::default(),
            vec![
                record("b", Status::Fail),
                record("a", Status::Pass),
                record("c", Status::ExpectedFail),
            ],
        );
        assert_eq!(
            r.checks.iter().map(|c| c.id.as_str()).collect::<Vec<_>>(),
            ["a", "b", "c"]
        );
        assert_eq!(
            r.summary,
            Summary {
                total: 3,
                pass: 1,
                fail: 1,
                expected_fail: 1
            }
        );
        assert!(!r.passed());
        assert_eq!(r.get("c").unwrap().status, Status::ExpectedFail);
    }

    #[test]
    fn expected_failures_do_not_fail_the_run() {
        let r = Report::new(SuiteConfig::default(), vec![record("x", Status::ExpectedFail)]);
        assert!(r.passed());
        assert!(r.to_text().starts_with("XFAIL x"));
    }

    #[test]
    fn json_omits_absent_fields() {
        let r = Report::new(SuiteConfig::default(), vec![record("a", Status::Pass)]);
        let json = r.to_json();
        assert!(json.ends_with("}\n"));
        assert!(!json.contains("witness") && !json.contains("elapsed_ms"));
        assert!(json.contains("\"status\": \"pass\""));
    }
}
