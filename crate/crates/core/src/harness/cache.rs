use super::document::EngineInfo;
use crate::operators::{self, BuildError, OperatorSpec, SliceOperator};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache directory {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// One cached operator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub engine: String,
    pub key: String,
    pub spec: OperatorSpec,
    pub order: Option<u32>,
    pub self_adjoint: bool,
    pub rendering: String,
    pub content_hash: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Built,
    /// The stored entry failed its hash check and was replaced.
    Rebuilt,
}

fn sha256_hex(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

impl CacheEntry {
    pub fn from_operator(spec: &OperatorSpec, op: &SliceOperator) -> Self {
        let engine = EngineInfo::current();
        let engine = format!("{} {}", engine.name, engine.version);
        let key = spec.key();
        let rendering = op.render();
        let order = op.order();
        let self_adjoint = op.is_self_adjoint();
        let content_hash = Self::hash_fields(&engine, &key, order, self_adjoint, &rendering);
        CacheEntry { engine, key, spec: spec.clone(), order, self_adjoint, rendering, content_hash }
    }

    fn hash_fields(engine: &str, key: &str, order: Option<u32>, self_adjoint: bool, rendering: &str) -> String {
        sha256_hex(&[engine, key, &format!("{order:?}"), &self_adjoint.to_string(), rendering])
    }

    pub fn is_intact(&self) -> bool {
        self.key == self.spec.key()
            && self.content_hash == Self::hash_fields(&self.engine, &self.key, self.order, self.self_adjoint, &self.rendering)
    }
}

/// Directory of content-hashed operator entries.
#[derive(Clone, Debug)]
pub struct OperatorCache {
    dir: PathBuf,
}

impl OperatorCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        OperatorCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn io(&self, source: io::Error) -> CacheError {
        CacheError::Io { path: self.dir.clone(), source }
    }

    pub fn path_for(&self, spec: &OperatorSpec) -> PathBuf {
        let name = sha256_hex(&[&spec.key()]);
        self.dir.join(format!("{}.json", &name[..24]))
    }

    /// `None` when absent, `Some(Err)` when unreadable or corrupt.
    fn load(&self, spec: &OperatorSpec) -> Option<Result<CacheEntry, String>> {
        let text = fs::read_to_string(self.path_for(spec)).ok()?;
        Some(match serde_json::from_str::<CacheEntry>(&text) {
            Ok(e) if e.is_intact() && e.spec == *spec => Ok(e),
            Ok(_) => Err("content hash mismatch".into()),
            Err(e) => Err(e.to_string()),
        })
    }

    fn store(&self, entry: &CacheEntry) -> Result<(), CacheError> {
        fs::create_dir_all(&self.dir).map_err(|e| self.io(e))?;
        let path = self.path_for(&entry.spec);
        let tmp = path.with_extension("json.tmp");
        let mut text = serde_json::to_string_pretty(entry).expect("entry serializes");
        text.push('\n');
        fs::write(&tmp, text).map_err(|e| self.io(e))?;
        fs::rename(&tmp, &path).map_err(|e| self.io(e))
    }

    /// Returns the cached entry for `spec`, building it when missing or corrupt.
    pub fn get_or_build(&self, spec: &OperatorSpec) -> Result<(CacheEntry, CacheOutcome), CacheError> {
        let outcome = match self.load(spec) {
            Some(Ok(e)) => return Ok((e, CacheOutcome::Hit)),
            Some(Err(_)) => CacheOutcome::Rebuilt,
            None => CacheOutcome::Built,
        };
        let op = operators::build(spec)?;
        let entry = CacheEntry::from_operator(spec, &op);
        self.store(&entry)?;
        Ok((entry, outcome))
    }

    /// Entries in file-name order; corrupt files are reported by name.
    pub fn list(&self) -> Result<Vec<(String, Result<CacheEntry, String>)>, CacheError> {
        let rd = match fs::read_dir(&self.dir) {
            Ok(rd) => rd,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(self.io(e)),
        };
        let mut names: Vec<PathBuf> = rd
            .filter_map(Result::ok)
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        names.sort();
        Ok(names
            .into_iter()
            .map(|p| {
                let name = p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                let entry = fs::read_to_string(&p)
                    .map_err(|e| e.to_string())
                    .and_then(|t| serde_json::from_str::<CacheEntry>(&t).map_err(|e| e.to_string()))
                    .and_then(|e| if e.is_intact() { Ok(e) } else { Err("content hash mismatch".into()) });
                (name, entry)
            })
            .collect())
    }

    /// Removes every entry; returns how many files were deleted.
    pub fn clear(&self) -> Result<usize, CacheError> {
        let rd = match fs::read_dir(&self.dir) {
            Ok(rd) => rd,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(0),
            Err(e) => return Err(self.io(e)),
        };
        let mut n = 0;
        for e in rd.filter_map(Result::ok) {
            let p = e.path();
            let name = p.to_string_lossy();
            if name.ends_with(".json") || name.ends_with(".json.tmp") {
                fs::remove_file(&p).map_err(|e| self.io(e))?;
                n += 1;
            }
        }
        Ok(n)
    }
}
