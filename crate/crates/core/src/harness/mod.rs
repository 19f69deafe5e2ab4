//! Run configuration, suite dispatch, report documents and the operator cache.

mod cache;
mod config;
mod document;
mod run;

pub use cache::{CacheEntry, CacheError, CacheOutcome, OperatorCache};
pub use config::{ConfigError, Format, RunConfig, Suite, CACHE_DIR_ENV, DEFAULT_CACHE_DIR};
pub use document::{EngineInfo, ReportDocument, Summary, ENGINE_NAME, ENGINE_VERSION, SCHEMA_VERSION};
pub use run::{tangential_suite, verify, SPHERE_DIMENSIONS};
