//! One PASS/FAIL line per acceptance criterion.
//!
//! Known failures are printed as FAIL and do not abort the run; any other
//! failing criterion makes the binary exit nonzero.

use conformal_detour::ambient::checks::check_superalgebra;
use conformal_detour::cone::Scale;
use conformal_detour::harness::{self, OperatorCache, RunConfig, Suite};
use conformal_detour::operators::suites::{
    conformal_laws, detour_identities, order_n_checks, q_curvature_checks, splitting_lemma, splitting_lemma_formula,
};
use conformal_detour::operators::{build_order_n, Family, OperatorSpec};
use conformal_detour::sphere;
use conformal_detour::symbols::{classify, classify_grid, detour_exactness, leading_decomposition, witnesses};
use conformal_detour::{CheckRecord, Signature, Status};
use std::time::{Duration, Instant};

const SEED: u64 = 7;
const TRIALS: usize = 8;

/// Criteria that fail for documented reasons.
const KNOWN_FAILURES: [u32; 2] = [7, 8];

struct Outcome {
    ok: bool,
    detail: String,
}

fn failing(recs: &[CheckRecord]) -> Vec<String> {
    recs.iter().filter(|r| !r.is_ok()).map(|r| r.id.clone()).collect()
}

fn summarize(recs: &[CheckRecord], limit: Duration, elapsed: Duration) -> Outcome {
    let bad = failing(recs);
    let in_time = elapsed <= limit;
    let mut detail = format!("{} records, {} failing, {:.1}s (limit {}s)", recs.len(), bad.len(), elapsed.as_secs_f64(), limit.as_secs());
    if !bad.is_empty() {
        detail.push_str(&format!("; failing: {}", bad.join(", ")));
    }
    Outcome { ok: bad.is_empty() && in_time, detail }
}

fn has(recs: &[CheckRecord], prefix: &str) -> bool {
    recs.iter().any(|r| r.id.starts_with(prefix) && r.is_ok())
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let mut recs = Vec::new();
    for (p, q) in [(4, 0), (3, 1), (6, 0)] {
        recs.extend(check_superalgebra(&Signature::new(p, q), SEED, TRIALS));
    }
    summarize(&recs, Duration::from_secs(60), t.elapsed())
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut recs = Vec::new();
    for n in [4, 6] {
        recs.extend(harness::tangential_suite(&Signature::riemannian(n), SEED, 3));
    }
    summarize(&recs, Duration::from_secs(120), t.elapsed())
}

fn identities(n: usize, limit: u64, required: &[&str]) -> Outcome {
    let t = Instant::now();
    let recs = detour_identities(&Signature::riemannian(n), SEED, TRIALS);
    let mut out = summarize(&recs, Duration::from_secs(limit), t.elapsed());
    let missing: Vec<&str> = required.iter().copied().filter(|p| !has(&recs, p)).collect();
    if !missing.is_empty() {
        out.ok = false;
        out.detail.push_str(&format!("; missing: {}", missing.join(", ")));
    }
    out
}

fn criterion_3() -> Outcome {
    identities(
        4,
        300,
        &[
            "maxwell/", "l0/", "l-minus-one/", "gjms", "factorization/k=0", "factorization/k=1", "chain/k=1", "chain/k=2",
            "dq-equals-g/", "g-zero", "g-top", "complex/",
        ],
    )
}

fn criterion_4() -> Outcome {
    identities(
        6,
        1800,
        &["maxwell/", "l0/", "gjms", "factorization/k=0", "factorization/k=1", "factorization/k=2", "dq-equals-g/", "g-zero", "complex/"],
    )
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let mut recs = Vec::new();
    for (n, ks) in [(4, vec![0, 1]), (6, vec![1])] {
        let sig = Signature::riemannian(n);
        recs.extend(conformal_laws(&sig, &ks, &Scale::round(&sig), SEED, TRIALS));
    }
    let mut out = summarize(&recs, Duration::from_secs(3600), t.elapsed());
    for p in ["q-transformation/", "nuq-law/", "scale-independence/L/", "scale-independence/G/"] {
        if !has(&recs, p) {
            out.ok = false;
            out.detail.push_str(&format!("; missing {p}"));
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let sig = Signature::riemannian(4);
    let recs = q_curvature_checks(&sig, &Scale::round(&sig));
    let get = |id: &str| recs.iter().find(|r| r.id == id);
    let flat = get("q-curvature/flat").is_some_and(|r| r.status == Status::Pass);
    let sphere = get("q-curvature/sphere");
    let sphere_ok = sphere.is_some_and(CheckRecord::is_ok);
    let fh = get("log-density-q");
    let fh_ok = fh.is_some_and(|r| r.is_ok() && r.constants.contains_key("c"));
    let show = |r: Option<&CheckRecord>| {
        r.map(|r| {
            let cs: Vec<String> = r.constants.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("{} [{}]", r.status.as_str(), cs.join(", "))
        })
        .unwrap_or_else(|| "missing".into())
    };
    Outcome {
        ok: flat && sphere_ok && fh_ok,
        detail: format!("flat Q = 0: {flat}; sphere: {}; log-density: {}", show(sphere), show(fh)),
    }
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let mut mismatches = Vec::new();
    let mut recs = Vec::new();
    for n in [4, 6] {
        let sig = Signature::riemannian(n);
        for row in classify_grid(&sig, SEED) {
            if !(row.matches && row.ratio_ok) {
                mismatches.push(format!("n={} k={} l={}: engine {:?}, expected {:?}", n, row.k, row.ell, row.class, row.predicted_class));
            }
        }
        for k in 0..=n / 2 {
            recs.extend(detour_exactness(&sig, k, SEED));
        }
        for k in 0..n / 2 {
            recs.extend(witnesses(&sig, k, SEED));
        }
    }
    let mut out = summarize(&recs, Duration::from_secs(120), t.elapsed());
    if !mismatches.is_empty() {
        out.ok = false;
        out.detail.push_str(&format!("; grid mismatches: {}", mismatches.join("; ")));
    }
    out
}

fn criterion_8() -> Outcome {
    let sig = Signature::riemannian(4);
    let op = build_order_n(&sig, 1).expect("order-n operator builds");
    let order = op.order();
    let sa = op.is_self_adjoint();
    let elliptic = classify(&op, SEED).is_elliptic();
    let d = leading_decomposition(&op, SEED).expect("leading symbol decomposes");
    let laplace_power = d.alpha == d.beta;
    let recs = order_n_checks(&sig, &[1], SEED, 3);
    let quasi = recs.iter().find(|r| r.id == "order-n/k=1").is_some_and(CheckRecord::is_ok);
    let h = 2i64;
    let mut degenerate = Vec::new();
    for k in 0..=4usize {
        for ell in -1..=h + 1 {
            let k_i = k as i64;
            if !(ell == 1 || ell == -1 || k_i + ell == h || k_i - ell == h) {
                continue;
            }
            let (c, relation) = splitting_lemma(&sig, k, ell, SEED, 3);
            let zero = relation && c.as_ref().is_some_and(|c| c.is_zero()) && splitting_lemma_formula(4, k_i, ell).is_zero();
            if !zero {
                degenerate.push(format!("(k={k}, l={ell})"));
            }
        }
    }
    Outcome {
        ok: order == Some(4) && sa && elliptic && laplace_power && degenerate.is_empty(),
        detail: format!(
            "order {:?}, self-adjoint {sa}, elliptic {elliptic}, quasi-Laplacian {quasi}, leading symbol {}·ιε + {}·ει so principal part ∝ Δ²: {laplace_power}; nonzero degenerate splitting constants: {}",
            order,
            d.alpha,
            d.beta,
            if degenerate.is_empty() { "none".to_string() } else { degenerate.join(" ") }
        ),
    }
}

fn criterion_9() -> Outcome {
    let t = Instant::now();
    let recs = sphere::sphere_audit_suite(&[4, 6, 8, 10, 12]);
    summarize(&recs, Duration::from_secs(10), t.elapsed())
}

fn criterion_10() -> Outcome {
    let cfg = RunConfig { suite: Suite::DetourIdentities, trials: 2, ..RunConfig::default() };
    let a = harness::verify(&cfg).expect("valid config").to_json();
    let b = harness::verify(&cfg).expect("valid config").to_json();
    let reports = a == b;

    let dirs = [tempfile::tempdir().expect("tempdir"), tempfile::tempdir().expect("tempdir")];
    let sig = Signature::riemannian(4);
    let specs = [
        OperatorSpec::new(Family::L, &sig, 1, 1, "flat"),
        OperatorSpec::new(Family::L, &sig, 0, 2, "flat"),
        OperatorSpec::new(Family::Q, &sig, 1, 1, "round"),
    ];
    let mut caches = true;
    for spec in &specs {
        let files: Vec<Vec<u8>> = dirs
            .iter()
            .map(|d| {
                let c = OperatorCache::new(d.path());
                c.get_or_build(spec).expect("builds");
                std::fs::read(c.path_for(spec)).expect("cache file")
            })
            .collect();
        caches &= files[0] == files[1];
    }
    Outcome {
        ok: reports && caches,
        detail: format!("identical JSON reports: {reports} ({} bytes); identical cache files: {caches} ({} entries)", a.len(), specs.len()),
    }
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "superalgebra tables", criterion_1),
        (2, "tangentiality, DD0 and domino", criterion_2),
        (3, "operator identities n=4", criterion_3),
        (4, "operator identities n=6", criterion_4),
        (5, "conformal transformation laws", criterion_5),
        (6, "Q-curvature values", criterion_6),
        (7, "symbol grid and witnesses", criterion_7),
        (8, "order-n operator", criterion_8),
        (9, "product sphere audit", criterion_9),
        (10, "determinism", criterion_10),
    ];
    let mut unexpected = Vec::new();
    for (i, name, run) in criteria {
        let t = Instant::now();
        let o = run();
        let status = if o.ok { "PASS" } else { "FAIL" };
        println!("criterion {i:>2} {status} {name} ({:.1}s): {}", t.elapsed().as_secs_f64(), o.detail);
        if !o.ok && !KNOWN_FAILURES.contains(&i) {
            unexpected.push(i);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
