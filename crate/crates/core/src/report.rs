//! Structured verification reports shared by every checker.

use serde::Serialize;
use serde_json::{json, Value};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A hypothesis of the check does not hold, so it was not run.
    Refused,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Refused => "refused",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Pass,
            witness: None,
            margin: None,
            detail: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
            margin: None,
            detail: None,
        }
    }

    pub fn refused(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Refused,
            witness: None,
            margin: None,
            detail: Some(reason.into()),
        }
    }

    /// Pass when `witness` is `None`, fail with it otherwise.
    pub fn from_witness(name: impl Into<String>, witness: Option<String>) -> Self {
        match witness {
            None => Check::pass(name),
            Some(w) => Check::fail(name, w),
        }
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = Some(margin);
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        ValidationReport {
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
    }

    /// Overall verdict: every check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn status_of(&self, name: &str) -> Option<Status> {
        self.check(name).map(|c| c.status)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn failure_summary(&self) -> String {
        let names: Vec<String> = self
            .failures()
            .map(|c| match &c.witness {
                Some(w) => format!("{} [{}]", c.name, w),
                None => format!("{} ({})", c.name, c.status),
            })
            .collect();
        if names.is_empty() {
            "no failures".to_string()
        } else {
            names.join(", ")
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "subject": self.subject,
            "verdict": if self.passed() { "pass" } else { "fail" },
            "checks": self.checks,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {}\n",
            self.subject,
            if self.passed() { "PASS" } else { "FAIL" }
        );
        for c in &self.checks {
            out.push_str(&format!("  [{}] {}", c.status, c.name));
            if let Some(w) = &c.witness {
                out.push_str(&format!(" witness={w}"));
            }
            if let Some(m) = c.margin {
                out.push_str(&format!(" margin={m:e}"));
            }
            if let Some(d) = &c.detail {
                out.push_str(&format!(" ({d})"));
            }
            out.push('\n');
        }
        out
    }
}
