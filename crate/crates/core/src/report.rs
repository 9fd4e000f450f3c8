//! Verdict structures shared by every check.
//!
//! A [`Check`] is one named verdict; a [`CheckReport`] is an ordered list of
//! them. Both are plain data with deterministic field order so a report
//! serializes to the same bytes on every run.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Status {
    Pass,
    Fail,
    /// A search ran out of budget. Never a claim of nonexistence.
    Inconclusive,
    /// The verdict rests on a hypothesis that could not be established.
    Conditional,
    /// A precondition was violated, so the check did not run.
    Refused,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::Conditional => "conditional",
            Status::Refused => "refused",
        }
    }

    /// Rank used to pick the worst status of a report.
    fn severity(&self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Inconclusive | Status::Conditional => 1,
            Status::Fail => 2,
            Status::Refused => 3,
        }
    }

    /// Process exit code: 0 pass, 1 fail, 2 inconclusive or conditional,
    /// 3 refused.
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive | Status::Conditional => 2,
            Status::Refused => 3,
        }
    }
}

/// Loosely typed detail value; keeps report payloads flat.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(untagged))]
pub enum Value {
    Bool(bool),
    Int(i64),
    Text(String),
    List(Vec<Value>),
}

impl From<bool> for Value {
    fn from(b: bool) -> Value {
        Value::Bool(b)
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Value {
        Value::Int(n)
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Value {
        Value::Int(n as i64)
    }
}

impl From<u64> for Value {
    fn from(n: u64) -> Value {
        Value::Int(n as i64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Value {
        Value::Text(s.into())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Value {
        Value::Text(s)
    }
}

impl From<Rat> for Value {
    fn from(r: Rat) -> Value {
        Value::Text(r.to_string())
    }
}

impl<T: Into<Value>> From<Vec<T>> for Value {
    fn from(v: Vec<T>) -> Value {
        Value::List(v.into_iter().map(Into::into).collect())
    }
}

/// Evidence attached to a verdict: the offending tuple and what it produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Witness {
    pub elements: Vec<String>,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub residual: Option<String>,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub lhs: Option<String>,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub rhs: Option<String>,
}

impl Witness {
    pub fn new<I, S>(elements: I) -> Witness
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Witness {
            elements: elements.into_iter().map(Into::into).collect(),
            ..Witness::default()
        }
    }

    pub fn residual(mut self, r: impl Into<String>) -> Witness {
        self.residual = Some(r.into());
        self
    }

    pub fn sides(mut self, lhs: impl Into<String>, rhs: impl Into<String>) -> Witness {
        self.lhs = Some(lhs.into());
        self.rhs = Some(rhs.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub witness: Option<Witness>,
    pub tuples: u64,
    pub details: BTreeMap<String, Value>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status) -> Check {
        Check {
            name: name.into(),
            status,
            witness: None,
            tuples: 0,
            details: BTreeMap::new(),
        }
    }

    pub fn pass(name: impl Into<String>) -> Check {
        Check::new(name, Status::Pass)
    }

    pub fn fail(name: impl Into<String>, witness: Witness) -> Check {
        Check::new(name, Status::Fail).with_witness(witness)
    }

    pub fn with_witness(mut self, w: Witness) -> Check {
        self.witness = Some(w);
        self
    }

    pub fn with_tuples(mut self, n: u64) -> Check {
        self.tuples = n;
        self
    }

    pub fn detail(mut self, key: &str, value: impl Into<Value>) -> Check {
        self.details.insert(key.into(), value.into());
        self
    }

    pub fn set_detail(&mut self, key: &str, value: impl Into<Value>) {
        self.details.insert(key.into(), value.into());
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CheckReport {
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn new() -> CheckReport {
        CheckReport::default()
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Worst status present; `Pass` for an empty report.
    pub fn worst(&self) -> Status {
        self.checks
            .iter()
            .map(|c| c.status)
            .max_by_key(|s| s.severity())
            .unwrap_or(Status::Pass)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::is_pass)
    }

    pub fn exit_code(&self) -> i32 {
        self.worst().exit_code()
    }

    pub fn total_tuples(&self) -> u64 {
        self.checks.iter().map(|c| c.tuples).sum()
    }
}

impl FromIterator<Check> for CheckReport {
    fn from_iter<I: IntoIterator<Item = Check>>(iter: I) -> Self {
        CheckReport {
            checks: iter.into_iter().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_status_ordering() {
        let mut r = CheckReport::new();
        assert_eq!(r.exit_code(), 0);
        r.push(Check::new("a", Status::Inconclusive));
        assert_eq!(r.exit_code(), 2);
        r.push(Check::fail("b", Witness::new(["x"])));
        assert_eq!(r.exit_code(), 1);
        r.push(Check::new("c", Status::Refused));
        assert_eq!(r.exit_code(), 3);
    }
}
