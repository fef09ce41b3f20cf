//! Verification reports shared by the identity suites.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{BiTail, InvTail, MSeries};

/// First coefficient where two sides of an identity disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub location: String,
    pub monomial: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<Mismatch>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub notes: BTreeMap<String, Value>,
}

impl Check {
    pub fn new(name: impl Into<String>, mismatch: Option<Mismatch>) -> Check {
        Check { name: name.into(), passed: mismatch.is_none(), mismatch, notes: BTreeMap::new() }
    }

    pub fn flag(name: impl Into<String>, passed: bool, why: &str) -> Check {
        let mismatch = (!passed).then(|| Mismatch {
            location: why.into(),
            monomial: String::new(),
            left: String::new(),
            right: String::new(),
        });
        Check { name: name.into(), passed, mismatch, notes: BTreeMap::new() }
    }

    pub fn note(mut self, key: &str, value: impl Into<Value>) -> Check {
        self.notes.insert(key.into(), value.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub params: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(suite: &str) -> SuiteReport {
        SuiteReport { suite: suite.into(), params: BTreeMap::new(), checks: Vec::new() }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> SuiteReport {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn with_checks(mut self, checks: Vec<Check>) -> SuiteReport {
        self.checks.extend(checks);
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Compares two series; the location string names the coefficient.
pub fn compare_series(location: &str, left: &MSeries, right: &MSeries) -> Option<Mismatch> {
    let (e, l, r) = left.first_difference(right)?;
    Some(Mismatch {
        location: location.into(),
        monomial: MSeries::format_monomial(left.vars(), &e),
        left: l.to_string(),
        right: r.to_string(),
    })
}

/// Compares two tails on every exponent where both are exact. Returns the
/// first mismatch (lowest order first) and the number of exponents compared.
pub fn compare_tails(left: &InvTail, right: &InvTail) -> (Option<Mismatch>, usize) {
    let window = left.common_window(right);
    let n = window.len();
    for e in window {
        if let Some(m) = compare_series(&format!("{}^{e}", left.aux()), &left.coeff(e), &right.coeff(e)) {
            return (Some(m), n);
        }
    }
    (None, n)
}

pub fn compare_bitails(left: &BiTail, right: &BiTail) -> (Option<Mismatch>, usize) {
    let window = left.common_window(right);
    let n = window.len();
    let (a, b) = left.aux();
    for e in window {
        let loc = format!("{a}^{} {b}^{}", e.0, e.1);
        if let Some(m) = compare_series(&loc, &left.coeff(e), &right.coeff(e)) {
            return (Some(m), n);
        }
    }
    (None, n)
}
