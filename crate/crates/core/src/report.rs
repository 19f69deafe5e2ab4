//! Check records shared by every verification suite.

use crate::arith::Rational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    PassWithFactor,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn is_ok(self) -> bool {
        self != Status::Fail
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::PassWithFactor => "PASS-with-factor",
            Status::Fail => "FAIL",
        }
    }
}

/// One verified statement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    pub constants: BTreeMap<String, Rational>,
    pub witness: Option<String>,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, status: Status) -> Self {
        CheckRecord {
            id: id.into(),
            anchor: anchor.into(),
            params: BTreeMap::new(),
            status,
            constants: BTreeMap::new(),
            witness: None,
        }
    }

    pub fn pass_if(id: impl Into<String>, anchor: impl Into<String>, ok: bool) -> Self {
        Self::new(id, anchor, Status::from_bool(ok))
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn constant(mut self, key: &str, value: Rational) -> Self {
        self.constants.insert(key.to_string(), value);
        self
    }

    pub fn witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    pub fn is_ok(&self) -> bool {
        self.status.is_ok()
    }
}

/// All records pass.
pub fn all_ok(records: &[CheckRecord]) -> bool {
    records.iter().all(CheckRecord::is_ok)
}

/// The failing records, for diagnostics.
pub fn failures(records: &[CheckRecord]) -> Vec<&CheckRecord> {
    records.iter().filter(|r| !r.is_ok()).collect()
}
