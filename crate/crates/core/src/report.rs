//! Verification reports shared by the model suites and the CLI.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    PassModConstraint,
    Fail,
    Measured,
}

impl Status {
    pub fn is_fail(self) -> bool {
        self == Status::Fail
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::PassModConstraint => "pass-mod-constraint",
            Status::Fail => "fail",
            Status::Measured => "measured",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    #[serde(rename = "ref")]
    pub reference: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub measured: Option<String>,
    pub ms: u64,
}

impl Check {
    pub fn new(id: impl Into<String>, reference: impl Into<String>, status: Status) -> Check {
        Check {
            id: id.into(),
            reference: reference.into(),
            status,
            residual: None,
            measured: None,
            ms: 0,
        }
    }

    /// Pass when `ok`, otherwise fail with the given residual text.
    pub fn verdict(
        id: impl Into<String>,
        reference: impl Into<String>,
        ok: bool,
        residual: impl FnOnce() -> String,
    ) -> Check {
        let mut c = Check::new(id, reference, if ok { Status::Pass } else { Status::Fail });
        if !ok {
            c.residual = Some(residual());
        }
        c
    }

    pub fn measured(id: impl Into<String>, reference: impl Into<String>, value: impl Into<String>) -> Check {
        let mut c = Check::new(id, reference, Status::Measured);
        c.measured = Some(value.into());
        c
    }

    pub fn with_residual(mut self, r: impl Into<String>) -> Check {
        self.residual = Some(r.into());
        self
    }

    pub fn with_measured(mut self, m: impl Into<String>) -> Check {
        self.measured = Some(m.into());
        self
    }

    pub fn with_ms(mut self, ms: u64) -> Check {
        self.ms = ms;
        self
    }

    pub fn passed(&self) -> bool {
        !self.status.is_fail()
    }
}

/// Run `f` and stamp the elapsed wall time on the check it returns.
pub fn timed(f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let c = f();
    let ms = start.elapsed().as_millis() as u64;
    c.with_ms(ms)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerificationReport {
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    /// Append another report's checks, prefixing their ids with its suite.
    pub fn merge(&mut self, other: VerificationReport) {
        for mut c in other.checks {
            c.id = format!("{}/{}", other.suite, c.id);
            self.checks.push(c);
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Duplicate ids, which a well-formed report never has.
    pub fn duplicate_ids(&self) -> Vec<String> {
        let mut seen = std::collections::BTreeSet::new();
        self.checks
            .iter()
            .filter(|c| !seen.insert(c.id.clone()))
            .map(|c| c.id.clone())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Fixed-column text rendering.
    pub fn to_text(&self) -> String {
        let mut out = format!("suite: {}\n", self.suite);
        let w = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in &self.checks {
            out.push_str(&format!(
                "{:<20} {:<w$}  {}",
                c.status.as_str(),
                c.id,
                c.reference,
                w = w
            ));
            if let Some(m) = &c.measured {
                out.push_str(&format!("  measured={m}"));
            }
            if let Some(r) = &c.residual {
                out.push_str(&format!("  residual={r}"));
            }
            out.push('\n');
        }
        let fails = self.failures().count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), fails));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_is_byte_identical() {
        let mut r = VerificationReport::new("demo");
        r.push(Check::new("a", "label", Status::Pass).with_ms(3));
        r.push(Check::measured("b", "factor", "2"));
        r.push(Check::new("c", "x", Status::Fail).with_residual("x0 - 1"));
        let text = r.to_json();
        let back = VerificationReport::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        assert!(text.contains("\"fail\""));
        assert!(!r.all_passed());
    }
}
