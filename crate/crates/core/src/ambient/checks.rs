//! Exact identity suites for the ambient operator algebra.

use super::expr::{OpAtom, OpExpr};
use super::form::{random_form, random_poly_form, AmbientForm};
use super::ops;
use crate::arith::{Rational, Signature};
use crate::report::{CheckRecord, Status};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_TRIALS: usize = 8;

pub fn rng_for(seed: u64, salt: &[u64]) -> ChaCha8Rng {
    let mut s = seed ^ 0x9e37_79b9_7f4a_7c15;
    for &x in salt {
        s = s.rotate_left(13) ^ x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    }
    ChaCha8Rng::seed_from_u64(s)
}

fn a(x: OpAtom) -> OpExpr {
    OpExpr::atom(x)
}

fn r(n: i64) -> Rational {
    Rational::from_int(n)
}

/// The odd generators, in table order.
pub fn odd_generators() -> Vec<(&'static str, OpAtom)> {
    vec![
        ("d", OpAtom::ExtD),
        ("δ", OpAtom::Codiff),
        ("ε(X)", OpAtom::EpsX),
        ("ι(X)", OpAtom::IotaX),
    ]
}

/// The even generators, in table order.
pub fn even_generators() -> Vec<(&'static str, OpAtom)> {
    vec![
        ("Δ", OpAtom::FormLap),
        ("ℒ", OpAtom::LieX),
        ("ℒ*", OpAtom::LieXStar),
        ("Q", OpAtom::MulQ),
    ]
}

fn kappa() -> OpExpr {
    a(OpAtom::LieX).sub(&a(OpAtom::LieXStar))
}

/// Expected `{P, R}` for odd `P`, `R` (indices into `odd_generators`).
pub fn anticommutator_table(i: usize, j: usize) -> OpExpr {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    match (i, j) {
        (0, 1) => a(OpAtom::FormLap),
        (0, 3) => a(OpAtom::LieX),
        (1, 2) => a(OpAtom::LieXStar),
        (2, 3) => a(OpAtom::MulQ),
        _ => OpExpr::zero(),
    }
}

/// Expected `[P, R]` for even `P` (index into `even_generators`) and
/// `R` from the concatenation `odd ++ even`.
pub fn commutator_table(i: usize, j: usize) -> OpExpr {
    use OpAtom::*;
    let z = OpExpr::zero;
    match (i, j) {
        (0, 0) | (0, 1) | (0, 4) => z(),
        (0, 2) => a(ExtD).scale(&r(-2)),
        (0, 3) => a(Codiff).scale(&r(2)),
        (0, 5) => a(FormLap).scale(&r(2)),
        (0, 6) => a(FormLap).scale(&r(-2)),
        (0, 7) => kappa().scale(&r(-2)),
        (1, 0) | (1, 3) | (1, 5) | (1, 6) => z(),
        (1, 1) => a(Codiff).scale(&r(-2)),
        (1, 2) => a(EpsX).scale(&r(2)),
        (1, 4) => a(FormLap).scale(&r(-2)),
        (1, 7) => a(MulQ).scale(&r(2)),
        (2, 1) | (2, 2) | (2, 5) | (2, 6) => z(),
        (2, 0) => a(ExtD).scale(&r(2)),
        (2, 3) => a(IotaX).scale(&r(-2)),
        (2, 4) => a(FormLap).scale(&r(2)),
        (2, 7) => a(MulQ).scale(&r(-2)),
        (3, 2) | (3, 3) | (3, 7) => z(),
        (3, 0) => a(EpsX).scale(&r(-2)),
        (3, 1) => a(IotaX).scale(&r(2)),
        (3, 4) => kappa().scale(&r(2)),
        (3, 5) => a(MulQ).scale(&r(-2)),
        (3, 6) => a(MulQ).scale(&r(2)),
        _ => unreachable!("table index out of range"),
    }
}

/// Checks `lhs F = rhs F` on every trial form; returns the first failing witness.
pub fn check_identity(lhs: &OpExpr, rhs: &OpExpr, trials: &[AmbientForm]) -> Option<String> {
    for f in trials {
        let l = lhs.apply(f).expect("degree in range");
        let r = rhs.apply(f).expect("degree in range");
        if !l.equals(&r) {
            return Some(format!(
                "F = {}; difference = {}",
                f.render(),
                l.sub(&r).render()
            ));
        }
    }
    None
}

/// Same as [`check_identity`] but modulo `(Q)`.
pub fn check_identity_mod_q(lhs: &OpExpr, rhs: &OpExpr, trials: &[AmbientForm]) -> Option<String> {
    for f in trials {
        let l = lhs.apply(f).expect("degree in range");
        let r = rhs.apply(f).expect("degree in range");
        if !l.equals_mod_q(&r) {
            return Some(format!("F = {}; residue = {}", f.render(), l.sub(&r).reduce_mod_cone().render()));
        }
    }
    None
}

fn poly_trials(sig: &Signature, k: usize, trials: usize, seed: u64) -> Vec<AmbientForm> {
    let mut rng = rng_for(seed, &[sig.p as u64, sig.q as u64, k as u64, 1]);
    (0..trials).map(|_| random_poly_form(sig, k, &mut rng)).collect()
}

/// Weighted trial forms; `w < 0` uses `t`-denominators.
pub fn weighted_trials(sig: &Signature, k: usize, w: i64, trials: usize, seed: u64) -> Vec<AmbientForm> {
    let mut rng = rng_for(seed, &[sig.p as u64, sig.q as u64, k as u64, w as u64, 2]);
    (0..trials).map(|_| random_form(sig, k, w, &mut rng)).collect()
}

fn anchor_table1() -> &'static str {
    "anticommutator table of the ambient superalgebra"
}

fn anchor_table2() -> &'static str {
    "commutator table of the ambient superalgebra"
}

/// All 16 anticommutator and 32 commutator entries plus the Euler relations,
/// on polynomial trial forms of every degree `0..=n+2`.
pub fn check_superalgebra(sig: &Signature, seed: u64, trials: usize) -> Vec<CheckRecord> {
    let dim = sig.dim();
    let forms: Vec<Vec<AmbientForm>> = (0..=dim).map(|k| poly_trials(sig, k, trials, seed)).collect();
    let odd = odd_generators();
    let even = even_generators();
    let all: Vec<(&str, OpAtom)> = odd.iter().cloned().chain(even.iter().cloned()).collect();
    let mut out = Vec::new();
    let run = |lhs: &OpExpr, rhs: &OpExpr| -> Option<String> {
        for (k, fs) in forms.iter().enumerate() {
            if let Some(w) = check_identity(lhs, rhs, fs) {
                return Some(format!("degree {k}: {w}"));
            }
        }
        None
    };
    for (i, (ni, pi)) in odd.iter().enumerate() {
        for (j, (nj, pj)) in odd.iter().enumerate() {
            let lhs = a(pi.clone()).then(&a(pj.clone())).add(&a(pj.clone()).then(&a(pi.clone())));
            let rhs = anticommutator_table(i, j);
            let witness = run(&lhs, &rhs);
            let mut rec = CheckRecord::pass_if(format!("table1/{{{ni},{nj}}}"), anchor_table1(), witness.is_none())
                .param("signature", format!("{},{}", sig.p, sig.q))
                .param("expected", rhs.to_string())
                .param("trials", trials);
            if let Some(w) = witness {
                rec = rec.witness(w);
            }
            out.push(rec);
        }
    }
    for (i, (ni, pi)) in even.iter().enumerate() {
        for (j, (nj, pj)) in all.iter().enumerate() {
            let lhs = a(pi.clone()).then(&a(pj.clone())).sub(&a(pj.clone()).then(&a(pi.clone())));
            let rhs = commutator_table(i, j);
            let witness = run(&lhs, &rhs);
            let mut rec = CheckRecord::pass_if(format!("table2/[{ni},{nj}]"), anchor_table2(), witness.is_none())
                .param("signature", format!("{},{}", sig.p, sig.q))
                .param("expected", rhs.to_string())
                .param("trials", trials);
            if let Some(w) = witness {
                rec = rec.witness(w);
            }
            out.push(rec);
        }
    }
    let n = sig.n() as i64;
    let euler_rel = a(OpAtom::Euler).scale(&r(2)).add(&OpExpr::identity().scale(&r(n + 2)));
    let w1 = run(&kappa(), &euler_rel);
    out.push(
        CheckRecord::pass_if("euler/L-Lstar", "ℒ_X − ℒ_X* = 2∇_X + n + 2", w1.is_none())
            .param("signature", format!("{},{}", sig.p, sig.q)),
    );
    let w2 = run(&a(OpAtom::LieX), &a(OpAtom::Euler).add(&a(OpAtom::Degree)));
    out.push(
        CheckRecord::pass_if("euler/L=NX+p", "ℒ_X = ∇_X + 𝐩", w2.is_none())
            .param("signature", format!("{},{}", sig.p, sig.q)),
    );
    let w3 = run(&a(OpAtom::ExtD).pow(2), &OpExpr::zero())
        .or_else(|| run(&a(OpAtom::Codiff).pow(2), &OpExpr::zero()));
    out.push(CheckRecord::pass_if("nilpotent/d2=delta2=0", "d̃² = 0 = δ̃²", w3.is_none()));
    out
}

/// Tangentiality of `op` acting at weight `w` on `k`-forms: `op(Q·F) ∈ (Q)` for
/// trial `F` of weight `w − 2`. Returns the failing `F` and residue.
pub fn check_tangential(
    op: &OpExpr,
    sig: &Signature,
    k: usize,
    w: i64,
    seed: u64,
    trials: usize,
) -> Result<(), (AmbientForm, AmbientForm)> {
    for f in weighted_trials(sig, k, w - 2, trials, seed) {
        let g = op.apply(&ops::mul_q(&f)).expect("degree in range");
        let res = g.reduce_mod_cone();
        if !res.is_zero() {
            return Err((f, res));
        }
    }
    Ok(())
}

/// The scalar `c` with `[Δ̃^m, Q] = c Δ̃^{m−1}` on weight-`w` inputs.
pub fn lap_power_commutator_scalar(n: i64, m: i64, w: i64) -> Rational {
    r(-2 * m * (2 * w - 2 * m + n + 4))
}

/// Tangentiality suite for one `(n, p, q)`.
pub fn check_tangential_suite(sig: &Signature, seed: u64, trials: usize) -> Vec<CheckRecord> {
    let n = sig.n() as i64;
    let mut out = Vec::new();
    let lap = a(OpAtom::FormLap);
    let qa = a(OpAtom::MulQ);
    for m in 1..=(n / 2 + 1) {
        for k in [0usize, 1, 2] {
            let w_op = m - n / 2;
            let lm = lap.pow(m as usize);
            let ok = check_tangential(&lm, sig, k, w_op, seed, trials).is_ok();
            out.push(
                CheckRecord::pass_if(format!("powers/tangential/m={m}/k={k}"), "Δ̃^m tangential at weight m − n/2", ok)
                    .param("n", n)
                    .param("weight", w_op),
            );
            // exact commutator scalar off the tangential weight
            let wf = 2 * m;
            let c = lap_power_commutator_scalar(n, m, wf);
            let lhs = lm.then(&qa).sub(&qa.then(&lm));
            let prev = lap.pow(m as usize - 1);
            let rhs = prev.scale(&c);
            let fs = weighted_trials(sig, k, wf, trials, seed);
            let wit = check_identity(&lhs, &rhs, &fs);
            let nonzero_residue = fs.iter().any(|f| {
                let res = lm.apply(&ops::mul_q(f)).expect("degree in range").reduce_mod_cone();
                let expect = rhs.apply(f).expect("degree in range").reduce_mod_cone();
                !res.is_zero() && res.equals(&expect)
            });
            let mut rec = CheckRecord::pass_if(
                format!("powers/commutator/m={m}/k={k}"),
                "[Δ̃^m, Q] = −2m(2w − 2m + n + 4)Δ̃^{m−1}",
                wit.is_none() && nonzero_residue,
            )
            .param("n", n)
            .param("input-weight", wf)
            .constant("scalar", c);
            if let Some(w) = wit {
                rec = rec.witness(w);
            }
            out.push(rec);
        }
    }
    for k in 0..=2usize {
        for w in [-3i64, -1, 0, 2] {
            for (name, atom, rhs_atom, sgn) in [
                ("eps", OpAtom::EpsDir, OpAtom::ExtD, -4),
                ("iota", OpAtom::IotaDir, OpAtom::Codiff, 4),
            ] {
                let op = a(atom);
                let tang = check_tangential(&op, sig, k, w, seed, trials).is_ok();
                let lhs = qa.then(&op).sub(&op.then(&qa));
                let rhs = qa.then(&a(rhs_atom)).scale(&r(sgn));
                let fs = weighted_trials(sig, k, w, trials, seed);
                let wit = check_identity(&lhs, &rhs, &fs);
                out.push(
                    CheckRecord::pass_if(
                        format!("dirac/{name}/k={k}/w={w}"),
                        "ε(Ð), ι(Ð) act tangentially along the cone",
                        tang && wit.is_none(),
                    )
                    .param("n", n),
                );
            }
        }
    }
    out
}

/// `ι(Ð)² = 0`, `ε(Ð)² = 0`, `{ι(Ð), ε(Ð)} = QΔ̃²`.
pub fn check_dd0(sig: &Signature, k: usize, w: i64, seed: u64, trials: usize) -> Vec<CheckRecord> {
    let fs = weighted_trials(sig, k, w, trials, seed);
    let e = a(OpAtom::EpsDir);
    let i = a(OpAtom::IotaDir);
    let cases = [
        ("iota-squared", i.pow(2), OpExpr::zero()),
        ("eps-squared", e.pow(2), OpExpr::zero()),
        (
            "anticommutator",
            i.then(&e).add(&e.then(&i)),
            a(OpAtom::MulQ).then(&a(OpAtom::FormLap).pow(2)),
        ),
    ];
    cases
        .into_iter()
        .map(|(name, lhs, rhs)| {
            let wit = check_identity(&lhs, &rhs, &fs);
            let mut rec = CheckRecord::pass_if(
                format!("dd0/{name}/k={k}/w={w}"),
                "ι(Ð)² = 0 = ε(Ð)², {ι(Ð), ε(Ð)} = QΔ̃²",
                wit.is_none(),
            )
            .param("n", sig.n());
            if let Some(w) = wit {
                rec = rec.witness(w);
            }
            rec
        })
        .collect()
}

/// The four domino identities at `(ℓ, k)`; `n` must be even.
pub fn check_domino(sig: &Signature, ell: usize, k: usize, seed: u64, trials: usize) -> Vec<CheckRecord> {
    let n = sig.n() as i64;
    let l = ell as i64;
    let lap = a(OpAtom::FormLap);
    let v_w = l - n / 2 + 1;
    let u_w = l - n / 2;
    let mut out = Vec::new();
    let mk = |name: &str, lhs: OpExpr, rhs: OpExpr, kk: usize, w: i64| {
        let fs = weighted_trials(sig, kk, w, trials, seed);
        let wit = check_identity(&lhs, &rhs, &fs);
        let mut rec = CheckRecord::pass_if(
            format!("domino/{name}/l={ell}/k={kk}"),
            "domino identities for Δ̃^ℓ and ε(Ð), ι(Ð)",
            wit.is_none(),
        )
        .param("n", n)
        .param("weight", w);
        if let Some(w) = wit {
            rec = rec.witness(w);
        }
        rec
    };
    out.push(mk(
        "eps-V",
        lap.pow(ell).then(&a(OpAtom::EpsDir)),
        a(OpAtom::EpsX).then(&lap.pow(ell + 1)),
        k,
        v_w,
    ));
    out.push(mk(
        "iota-V",
        lap.pow(ell).then(&a(OpAtom::IotaDir)),
        a(OpAtom::IotaX).then(&lap.pow(ell + 1)),
        k.max(1),
        v_w,
    ));
    out.push(mk(
        "eps-U",
        a(OpAtom::EpsDir).then(&lap.pow(ell)),
        lap.pow(ell + 1).then(&a(OpAtom::EpsX)),
        k,
        u_w,
    ));
    out.push(mk(
        "iota-U",
        a(OpAtom::IotaDir).then(&lap.pow(ell)),
        lap.pow(ell + 1).then(&a(OpAtom::IotaX)),
        k.max(1),
        u_w,
    ));
    out
}

/// Componentwise Bochner Laplacian equals `δ̃d̃ + d̃δ̃`.
pub fn bochner_equals_form_lap(f: &AmbientForm) -> bool {
    ops::bochner_lap(f).equals(&ops::form_lap(f))
}

/// Aggregate status of a record list.
pub fn summarize(records: &[CheckRecord]) -> Status {
    Status::from_bool(records.iter().all(CheckRecord::is_ok))
}
