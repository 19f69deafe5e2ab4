use super::config::{ConfigError, RunConfig, Suite};
use super::document::ReportDocument;
use crate::ambient::checks;
use crate::arith::Signature;
use crate::cone::Scale;
use crate::operators::suites;
use crate::report::CheckRecord;
use crate::sphere;
use crate::symbols;

/// Dimensions covered by the sphere audit inside `all`.
pub const SPHERE_DIMENSIONS: [usize; 5] = [4, 6, 8, 10, 12];

/// Record ids owned by the `q-operators` suite.
const Q_PREFIXES: [&str; 7] = ["factorization/", "chain/", "dq-equals-g/", "g-", "q-top", "self-adjoint/Q/", "complex/"];

fn is_q_record(r: &CheckRecord) -> bool {
    Q_PREFIXES.iter().any(|p| r.id.starts_with(p))
}

fn sig_tag(sig: &Signature) -> String {
    format!("{},{}", sig.p, sig.q)
}

fn tag(prefix: &str, recs: Vec<CheckRecord>) -> Vec<CheckRecord> {
    recs.into_iter()
        .map(|mut r| {
            r.id = format!("{prefix}/{}", r.id);
            r
        })
        .collect()
}

/// Ambient tangentiality: powers of Δ̃, the Dirac-type operators, their
/// squares and the domino identities.
pub fn tangential_suite(sig: &Signature, seed: u64, trials: usize) -> Vec<CheckRecord> {
    let mut out = checks::check_tangential_suite(sig, seed, trials);
    for k in 0..=2 {
        for w in [-1, 0, 1] {
            out.extend(checks::check_dd0(sig, k, w, seed, trials));
        }
    }
    for ell in 0..=sig.n() / 2 + 1 {
        for k in [0, 1] {
            out.extend(checks::check_domino(sig, ell, k, seed, trials));
        }
    }
    out
}

fn law_degrees(cfg: &RunConfig, sig: &Signature) -> Vec<usize> {
    match &cfg.k {
        Some(ks) => ks.iter().copied().filter(|&k| k < sig.n() / 2).collect(),
        None if sig.n() == 4 => vec![0, 1],
        None => vec![1],
    }
}

fn order_n_degrees(cfg: &RunConfig, sig: &Signature) -> Vec<usize> {
    match &cfg.k {
        Some(ks) => ks.iter().copied().filter(|&k| k <= sig.n()).collect(),
        None => vec![1],
    }
}

fn hat_scale(cfg: &RunConfig, sig: &Signature) -> Result<Scale, ConfigError> {
    Scale::by_id(sig, &cfg.scale).map_err(|e| ConfigError::Unsupported(e.to_string()))
}

/// Runs the configured suites and assembles the report.
pub fn verify(cfg: &RunConfig) -> Result<ReportDocument, ConfigError> {
    cfg.validate()?;
    let suites = cfg.suite.expand();
    let sigs = cfg.signatures()?;
    let explicit = cfg.suite != Suite::All;
    let (seed, trials) = (cfg.seed, cfg.trials);
    let mut out = Vec::new();
    for s in &suites {
        if *s == Suite::SphereAudit {
            let ns: &[usize] = if explicit { &cfg.n } else { &SPHERE_DIMENSIONS };
            let recs = sphere::sphere_audit_suite(ns)
                .into_iter()
                .map(|mut r| {
                    r.id = format!("{}/{}", s, r.id.trim_start_matches("sphere/"));
                    r
                })
                .collect::<Vec<_>>();
            out.extend(recs);
            continue;
        }
        for sig in &sigs {
            let prefix = format!("{s}/{}", sig_tag(sig));
            let recs = match s {
                Suite::Superalgebra => checks::check_superalgebra(sig, seed, trials),
                Suite::Tangential => tangential_suite(sig, seed, trials),
                Suite::DetourIdentities => {
                    let all = suites::detour_identities(sig, seed, trials);
                    if explicit {
                        all
                    } else {
                        all.into_iter().filter(|r| !is_q_record(r)).collect()
                    }
                }
                Suite::QOperators => {
                    let hat = hat_scale(cfg, sig)?;
                    let mut v: Vec<CheckRecord> =
                        suites::detour_identities(sig, seed, trials).into_iter().filter(is_q_record).collect();
                    v.extend(suites::conformal_laws(sig, &law_degrees(cfg, sig), &hat, seed, trials));
                    v.extend(suites::q_curvature_checks(sig, &hat));
                    v
                }
                Suite::OrderN => suites::order_n_checks(sig, &order_n_degrees(cfg, sig), seed, trials),
                Suite::Star => suites::star_checks(sig),
                Suite::Symbols if !sig.is_riemannian() => {
                    if explicit {
                        return Err(ConfigError::Unsupported("the symbol suite needs a Riemannian signature".into()));
                    }
                    Vec::new()
                }
                Suite::Symbols => symbols::symbol_suite(sig, seed),
                Suite::SphereAudit | Suite::All => unreachable!("expanded above"),
            };
            out.extend(tag(&prefix, recs));
        }
    }
    Ok(ReportDocument::new(cfg.echo(), out))
}
