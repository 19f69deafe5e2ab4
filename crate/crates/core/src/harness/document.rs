use crate::operators::CONVENTION_VERSION;
use crate::report::{CheckRecord, Status};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write;

pub const SCHEMA_VERSION: u32 = 1;
pub const ENGINE_NAME: &str = "conformal-detour";
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineInfo {
    pub name: String,
    pub version: String,
    pub schema: u32,
}

impl EngineInfo {
    pub fn current() -> Self {
        EngineInfo { name: ENGINE_NAME.into(), version: ENGINE_VERSION.into(), schema: SCHEMA_VERSION }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub pass_with_factor: usize,
    pub fail: usize,
}

impl Summary {
    pub fn of(checks: &[CheckRecord]) -> Self {
        let mut s = Summary { total: checks.len(), ..Summary::default() };
        for c in checks {
            match c.status {
                Status::Pass => s.pass += 1,
                Status::PassWithFactor => s.pass_with_factor += 1,
                Status::Fail => s.fail += 1,
            }
        }
        s
    }
}

/// A complete verification report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub engine: EngineInfo,
    pub conventions: String,
    pub config: BTreeMap<String, String>,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl ReportDocument {
    pub fn new(config: BTreeMap<String, String>, checks: Vec<CheckRecord>) -> Self {
        ReportDocument {
            engine: EngineInfo::current(),
            conventions: CONVENTION_VERSION.into(),
            config,
            summary: Summary::of(&checks),
            checks,
        }
    }

    pub fn all_ok(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} ({})", self.engine.name, self.engine.version, self.conventions);
        let cfg: Vec<String> = self.config.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "config: {}", cfg.join(" "));
        for c in &self.checks {
            let _ = write!(out, "{:<16} {}", c.status.as_str(), c.id);
            if !c.constants.is_empty() {
                let cs: Vec<String> = c.constants.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = write!(out, " [{}]", cs.join(", "));
            }
            let _ = writeln!(out, "  -- {}", c.anchor);
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "{:<16} witness: {w}", "");
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "summary: {} checks, {} pass, {} pass-with-factor, {} fail",
            s.total, s.pass, s.pass_with_factor, s.fail
        );
        out
    }
}
