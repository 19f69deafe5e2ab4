use crate::arith::Signature;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use thiserror::Error;

/// Environment variable consulted for the cache directory.
pub const CACHE_DIR_ENV: &str = "DETOUR_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".detour-cache";

const SECTIONS: [&str; 4] = ["run", "operator", "report", "cache"];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown key {0}")]
    UnknownKey(String),
    #[error("invalid value for {key}: {value}")]
    InvalidValue { key: String, value: String },
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Superalgebra,
    Tangential,
    DetourIdentities,
    QOperators,
    OrderN,
    Star,
    Symbols,
    SphereAudit,
    All,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Superalgebra,
        Suite::Tangential,
        Suite::DetourIdentities,
        Suite::QOperators,
        Suite::OrderN,
        Suite::Star,
        Suite::Symbols,
        Suite::SphereAudit,
        Suite::All,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Superalgebra => "superalgebra",
            Suite::Tangential => "tangential",
            Suite::DetourIdentities => "detour-identities",
            Suite::QOperators => "q-operators",
            Suite::OrderN => "order-n",
            Suite::Star => "star",
            Suite::Symbols => "symbols",
            Suite::SphereAudit => "sphere-audit",
            Suite::All => "all",
        }
    }

    /// The concrete suites `self` expands to.
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::ALL[..8].to_vec(),
            s => vec![s],
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.as_str() == s).ok_or_else(|| format!("unknown suite {s}"))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s}")),
        }
    }
}

/// Everything that determines a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub n: Vec<usize>,
    pub signature: Option<(usize, usize)>,
    pub k: Option<Vec<usize>>,
    pub ell: Option<Vec<i64>>,
    pub scale: String,
    pub family: String,
    pub seed: u64,
    pub trials: usize,
    pub suite: Suite,
    pub format: Format,
    pub cache_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: vec![4],
            signature: None,
            k: None,
            ell: None,
            scale: crate::cone::ROUND.to_string(),
            family: "L".to_string(),
            seed: 7,
            trials: 8,
            suite: Suite::All,
            format: Format::Text,
            cache_dir: PathBuf::from(DEFAULT_CACHE_DIR),
        }
    }
}

/// Parses `4`, `4,6` or `4..12` (inclusive; even values only when `even`).
fn parse_grid(key: &str, value: &str, even: bool) -> Result<Vec<i64>, ConfigError> {
    let bad = || ConfigError::InvalidValue { key: key.into(), value: value.into() };
    let mut out = Vec::new();
    for part in value.split(',').map(str::trim) {
        if let Some((a, b)) = part.split_once("..") {
            let lo: i64 = a.trim().parse().map_err(|_| bad())?;
            let hi: i64 = b.trim().parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            for v in lo..=hi {
                if even && v % 2 != 0 {
                    continue;
                }
                out.push(v);
            }
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn to_usize(key: &str, value: &str, v: Vec<i64>) -> Result<Vec<usize>, ConfigError> {
    v.into_iter()
        .map(|x| usize::try_from(x).map_err(|_| ConfigError::InvalidValue { key: key.into(), value: value.into() }))
        .collect()
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::InvalidValue { key: key.into(), value: value.into() })
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Sets one key; keys match the command-line flag names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let value = value.trim();
        match key {
            "n" => self.n = to_usize(key, value, parse_grid(key, value, true)?)?,
            "signature" => {
                let (p, q) = value
                    .split_once(',')
                    .ok_or_else(|| ConfigError::InvalidValue { key: key.into(), value: value.into() })?;
                self.signature = Some((parse_value(key, p.trim())?, parse_value(key, q.trim())?));
            }
            "k" => self.k = Some(to_usize(key, value, parse_grid(key, value, false)?)?),
            "ell" => self.ell = Some(parse_grid(key, value, false)?),
            "scale" => self.scale = value.to_string(),
            "family" => self.family = value.to_string(),
            "seed" => self.seed = parse_value(key, value)?,
            "trials" => self.trials = parse_value(key, value)?,
            "suite" => self.suite = parse_value(key, value)?,
            "format" => self.format = parse_value(key, value)?,
            "cache-dir" => self.cache_dir = PathBuf::from(value),
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Reads `key = value` lines grouped under `[section]` headers.
    pub fn apply_file(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                if !SECTIONS.contains(&name.trim()) {
                    return Err(ConfigError::Syntax { line: i + 1, msg: format!("unknown section [{name}]") });
                }
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax { line: i + 1, msg: "expected key = value".into() })?;
            self.set(k.trim(), v)?;
        }
        Ok(())
    }

    /// Signatures for the operator suites, one per requested `n`.
    pub fn signatures(&self) -> Result<Vec<Signature>, ConfigError> {
        if let Some((p, q)) = self.signature {
            if self.n.len() != 1 || self.n[0] != p + q {
                return Err(ConfigError::Unsupported(format!(
                    "signature {p},{q} requires a single n = {}",
                    p + q
                )));
            }
            return Ok(vec![Signature::new(p, q)]);
        }
        Ok(self.n.iter().map(|&n| Signature::riemannian(n)).collect())
    }

    /// Checks ranges for the selected suites.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials == 0 {
            return Err(ConfigError::Unsupported("trials must be positive".into()));
        }
        self.signatures()?;
        let sphere_only = self.suite == Suite::SphereAudit;
        for &n in &self.n {
            if n < 4 || n % 2 == 1 {
                return Err(ConfigError::Unsupported(format!("n = {n} must be even and at least 4")));
            }
            if sphere_only && n > 12 {
                return Err(ConfigError::Unsupported(format!("sphere audits run for n ≤ 12, got {n}")));
            }
            if !sphere_only && n > 6 {
                return Err(ConfigError::Unsupported(format!("operator suites run for n ∈ {{4, 6}}, got {n}")));
            }
        }
        if let Some(ks) = &self.k {
            let top = *self.n.iter().max().expect("nonempty");
            if ks.iter().any(|&k| k > top) {
                return Err(ConfigError::Unsupported(format!("k exceeds n = {top}")));
            }
        }
        Ok(())
    }

    /// Deterministic echo of the configuration for reports.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("n".into(), join(&self.n));
        if let Some((p, q)) = self.signature {
            m.insert("signature".into(), format!("{p},{q}"));
        }
        if let Some(k) = &self.k {
            m.insert("k".into(), join(k));
        }
        if let Some(l) = &self.ell {
            m.insert("ell".into(), join(l));
        }
        m.insert("scale".into(), self.scale.clone());
        m.insert("seed".into(), self.seed.to_string());
        m.insert("trials".into(), self.trials.to_string());
        m.insert("suite".into(), self.suite.to_string());
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_and_sections() {
        let mut c = RunConfig::default();
        c.apply_file("[run]\nn = 4..12\nseed = 11 # comment\n[operator]\nk = 0,2\n").unwrap();
        assert_eq!(c.n, vec![4, 6, 8, 10, 12]);
        assert_eq!(c.seed, 11);
        assert_eq!(c.k, Some(vec![0, 2]));
        assert!(matches!(c.apply_file("[bogus]\n"), Err(ConfigError::Syntax { line: 1, .. })));
        assert_eq!(c.set("colour", "red"), Err(ConfigError::UnknownKey("colour".into())));
    }

    #[test]
    fn signature_must_match_n() {
        let mut c = RunConfig::default();
        c.set("signature", "3,1").unwrap();
        assert_eq!(c.signatures().unwrap(), vec![Signature::new(3, 1)]);
        c.set("n", "6").unwrap();
        assert!(c.signatures().is_err());
    }
}
