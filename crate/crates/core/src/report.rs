//! Deterministic pass/fail reports shared by the verification entry points.

use serde::{Deserialize, Serialize};

/// One named check with a human-readable detail line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// An ordered list of checks; the report passes iff every check does.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(checks: Vec<Check>) -> Self {
        VerificationReport {
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }

    /// First failing check, if any.
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    /// One line per check plus a summary line, stable across runs.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.pass { "ok  " } else { "FAIL" };
            out.push_str(&format!("{status}  {}: {}\n", c.name, c.detail));
        }
        if self.pass {
            out.push_str(&format!("all {} checks passed\n", self.checks.len()));
        } else {
            let failed = self.checks.iter().filter(|c| !c.pass).count();
            out.push_str(&format!(
                "{failed} of {} checks FAILED (first: {})\n",
                self.checks.len(),
                self.first_failure().map(|c| c.name.as_str()).unwrap_or("-")
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_is_the_conjunction() {
        let ok = VerificationReport::new(vec![Check::new("x", true, "d")]);
        assert!(ok.pass);
        let bad = VerificationReport::new(vec![
            Check::new("x", true, "d"),
            Check::new("y", false, "boom"),
        ]);
        assert!(!bad.pass);
        assert_eq!(bad.first_failure().unwrap().name, "y");
        assert!(bad.render_text().contains("FAIL  y: boom"));
    }

    #[test]
    fn json_shape() {
        let r = VerificationReport::new(vec![Check::new("x", true, "d")]);
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"pass":true,"checks":[{"name":"x","pass":true,"detail":"d"}]}"#
        );
    }
}
