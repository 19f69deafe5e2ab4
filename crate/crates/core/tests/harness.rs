use conformal_detour::harness::{self, CacheOutcome, ConfigError, Format, OperatorCache, ReportDocument, RunConfig, Suite};
use conformal_detour::operators::{Family, OperatorSpec};
use conformal_detour::Signature;
use std::fs;

#[test]
fn config_file_and_overrides() {
    let mut cfg = RunConfig::default();
    cfg.apply_file("# comment\n[run]\nn = 4..8\nseed = 11\nsuite = sphere-audit\n[report]\nformat = json\n").unwrap();
    assert_eq!(cfg.n, vec![4, 6, 8]);
    assert_eq!(cfg.seed, 11);
    assert_eq!(cfg.suite, Suite::SphereAudit);
    assert_eq!(cfg.format, Format::Json);
    cfg.set("n", "4,6").unwrap();
    assert_eq!(cfg.n, vec![4, 6]);
    assert!(cfg.validate().is_ok());
}

#[test]
fn config_rejects_bad_input() {
    let mut cfg = RunConfig::default();
    assert!(cfg.set("suite", "everything").is_err());
    assert!(cfg.apply_file("[nowhere]\nn = 4\n").is_err());
    assert!(cfg.apply_file("[run]\njust words\n").is_err());
    cfg.set("n", "8").unwrap();
    cfg.set("suite", "symbols").unwrap();
    assert!(matches!(cfg.validate(), Err(ConfigError::Unsupported(_))));
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let mut cfg = RunConfig::default();
    cfg.set("n", "4..12").unwrap();
    cfg.set("suite", "sphere-audit").unwrap();
    let a = harness::verify(&cfg).unwrap();
    let b = harness::verify(&cfg).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert!(a.all_ok());
    let back: ReportDocument = serde_json::from_str(&a.to_json()).unwrap();
    assert_eq!(back.to_text(), a.to_text());
    assert_eq!(back.summary.total, a.checks.len());
}

#[test]
fn seed_changes_trials_but_not_verdicts() {
    let mut cfg = RunConfig::default();
    cfg.set("suite", "superalgebra").unwrap();
    cfg.set("trials", "2").unwrap();
    let a = harness::verify(&cfg).unwrap();
    cfg.set("seed", "99").unwrap();
    let b = harness::verify(&cfg).unwrap();
    assert!(a.all_ok() && b.all_ok());
    assert_eq!(a.checks.len(), b.checks.len());
}

#[test]
fn cache_hits_and_rebuilds_corrupt_entries() {
    let dir = tempfile::tempdir().unwrap();
    let cache = OperatorCache::new(dir.path());
    let spec = OperatorSpec::new(Family::L, &Signature::riemannian(4), 1, 1, "flat");
    let (built, outcome) = cache.get_or_build(&spec).unwrap();
    assert_eq!(outcome, CacheOutcome::Built);
    assert_eq!(built.order, Some(2));
    assert!(built.self_adjoint);
    let (hit, outcome) = cache.get_or_build(&spec).unwrap();
    assert_eq!(outcome, CacheOutcome::Hit);
    assert_eq!(hit, built);

    let path = cache.path_for(&spec);
    let tampered = fs::read_to_string(&path).unwrap().replace("\"self_adjoint\": true", "\"self_adjoint\": false");
    fs::write(&path, tampered).unwrap();
    assert!(cache.list().unwrap()[0].1.is_err());
    let (again, outcome) = cache.get_or_build(&spec).unwrap();
    assert_eq!(outcome, CacheOutcome::Rebuilt);
    assert_eq!(again, built);

    fs::write(&path, "not json").unwrap();
    assert_eq!(cache.get_or_build(&spec).unwrap().1, CacheOutcome::Rebuilt);
    assert_eq!(cache.clear().unwrap(), 1);
    assert!(cache.list().unwrap().is_empty());
}
