//! Structured pass/fail reports for axiom and identity verification.

use serde::Serialize;
use std::fmt;

/// One verified statement: a name, the outcome, and failure details if any.
#[derive(Debug, Clone, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// An ordered list of check outcomes. Failures are data, not panics.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub items: Vec<CheckItem>,
}

impl Report {
    pub fn new() -> Self {
        Report { items: Vec::new() }
    }

    pub fn record(&mut self, name: impl Into<String>, pass: bool, detail: Option<String>) {
        self.items.push(CheckItem {
            name: name.into(),
            pass,
            detail: if pass { None } else { detail },
        });
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.record(name, true, None);
    }

    pub fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.record(name, false, Some(detail.into()));
    }

    /// Record an equality-style check: passes when `ok` is true.
    pub fn check(&mut self, name: impl Into<String>, ok: bool, on_fail: impl Into<String>) {
        if ok {
            self.pass(name);
        } else {
            self.fail(name, on_fail);
        }
    }

    pub fn extend(&mut self, other: Report) {
        self.items.extend(other.items);
    }

    /// Prefix every item name, used when nesting reports.
    pub fn extend_prefixed(&mut self, prefix: &str, other: Report) {
        for mut item in other.items {
            item.name = format!("{prefix}{}", item.name);
            self.items.push(item);
        }
    }

    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            if item.pass {
                writeln!(f, "PASS {}", item.name)?;
            } else {
                match &item.detail {
                    Some(d) => writeln!(f, "FAIL {}: {}", item.name, d)?,
                    None => writeln!(f, "FAIL {}", item.name)?,
                }
            }
        }
        Ok(())
    }
}
