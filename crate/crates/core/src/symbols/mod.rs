//! Principal symbols, ellipticity classes and symbol-level exactness.
//!
//! Symbols are stored raw: the matrix of `Σ_{|α|=m} c_α ξ^α`. The symbol in
//! the usual `∂ ↦ iξ` convention is `i^m` times this matrix.

pub mod linalg;

use crate::ambient::{mask_indices, sign_before};
use crate::arith::{Rational, Signature};
use crate::cone::masks_of_degree;
use crate::operators::{self, SliceOperator};
use crate::report::{CheckRecord, Status};
use linalg::Matrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolMatrix {
    pub xi: Vec<Rational>,
    pub order: u32,
    pub rows: Vec<u32>,
    pub cols: Vec<u32>,
    pub matrix: Matrix,
}

impl SymbolMatrix {
    pub fn is_zero(&self) -> bool {
        linalg::is_zero(&self.matrix)
    }

    /// `i^m` as `(real sign, imaginary?)`.
    pub fn unit(&self) -> (i64, bool) {
        match self.order % 4 {
            0 => (1, false),
            1 => (1, true),
            2 => (-1, false),
            _ => (-1, true),
        }
    }
}

/// Top-order part of `P` at `x = 0`, contracted with `ξ`.
pub fn principal_symbol(p: &SliceOperator, xi: &[Rational]) -> SymbolMatrix {
    let n = p.sig.n();
    let rows = masks_of_degree(n, p.dst.0);
    let cols = masks_of_degree(n, p.src.0);
    let order = p.order().unwrap_or(0);
    principal_symbol_of_order(p, xi, order, rows, cols)
}

fn principal_symbol_of_order(p: &SliceOperator, xi: &[Rational], order: u32, rows: Vec<u32>, cols: Vec<u32>) -> SymbolMatrix {
    let n = p.sig.n();
    let origin = vec![Rational::zero(); n];
    let mut m = linalg::zeros(rows.len(), cols.len());
    for (&(i, j), s) in &p.entries {
        let (Some(ri), Some(cj)) = (rows.iter().position(|&r| r == i), cols.iter().position(|&c| c == j)) else {
            continue;
        };
        for (alpha, c) in s {
            if alpha.degree() != order {
                continue;
            }
            let cv = c.eval(&origin).expect("coefficient regular at the origin");
            let mut mono = cv;
            for (v, &e) in alpha.0.iter().enumerate().take(n) {
                mono = &mono * &xi[v].pow(e as u32);
            }
            m[ri][cj] += &mono;
        }
    }
    SymbolMatrix { xi: xi.to_vec(), order, rows, cols, matrix: m }
}

/// Raw symbol of `ε(ξ)` on `Λ^k`.
pub fn eps_symbol(sig: &Signature, k: usize, xi: &[Rational]) -> Matrix {
    let n = sig.n();
    let rows = masks_of_degree(n, k + 1);
    let cols = masks_of_degree(n, k);
    let mut m = linalg::zeros(rows.len(), cols.len());
    for (cj, &mask) in cols.iter().enumerate() {
        for (i, x) in xi.iter().enumerate() {
            if mask & (1 << i) != 0 || x.is_zero() {
                continue;
            }
            let ri = rows.iter().position(|&r| r == mask | (1 << i)).expect("row");
            m[ri][cj] += &(x * &Rational::from_int(sign_before(mask, i)));
        }
    }
    m
}

/// Raw symbol of `ι(ξ♯)` on `Λ^k`.
pub fn iota_symbol(sig: &Signature, k: usize, xi: &[Rational]) -> Matrix {
    let n = sig.n();
    let rows = masks_of_degree(n, k.saturating_sub(1));
    let cols = masks_of_degree(n, k);
    let mut m = linalg::zeros(rows.len(), cols.len());
    if k == 0 {
        return m;
    }
    for (cj, &mask) in cols.iter().enumerate() {
        for i in mask_indices(mask) {
            let ri = rows.iter().position(|&r| r == mask & !(1 << i)).expect("row");
            let s = sig.eps(i + 1) * sign_before(mask, i);
            m[ri][cj] += &(&xi[i] * &Rational::from_int(s));
        }
    }
    m
}

pub fn norm_sq(sig: &Signature, xi: &[Rational]) -> Rational {
    let mut t = Rational::zero();
    for (i, x) in xi.iter().enumerate() {
        t += &(&(x * x) * &Rational::from_int(sig.eps(i + 1)));
    }
    t
}

/// `(P₁, P₂) = (ι(ξ)ε(ξ), ε(ξ)ι(ξ)) / |ξ|²` on `Λ^k`.
pub fn projections(sig: &Signature, k: usize, xi: &[Rational]) -> (Matrix, Matrix) {
    let n = sig.n();
    let inv = norm_sq(sig, xi).recip();
    let p1 = if k < n {
        linalg::mul(&iota_symbol(sig, k + 1, xi), &eps_symbol(sig, k, xi))
    } else {
        linalg::zeros(1, 1)
    };
    let p2 = if k > 0 {
        linalg::mul(&eps_symbol(sig, k - 1, xi), &iota_symbol(sig, k, xi))
    } else {
        linalg::zeros(1, 1)
    };
    (linalg::scale(&p1, &inv), linalg::scale(&p2, &inv))
}

/// `σ_raw = |ξ|^m (α P₁ + β P₂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub alpha: Rational,
    pub beta: Rational,
    pub rank1: usize,
    pub rank2: usize,
}

fn decompose_at(s: &SymbolMatrix, sig: &Signature, k: usize) -> Option<Decomposition> {
    if s.order % 2 == 1 || s.rows != s.cols {
        return None;
    }
    let (p1, p2) = projections(sig, k, &s.xi);
    let r1 = linalg::rank(&p1);
    let r2 = linalg::rank(&p2);
    let norm_m = norm_sq(sig, &s.xi).pow(s.order / 2);
    let inv = norm_m.recip();
    let alpha = if r1 > 0 {
        &linalg::trace(&linalg::mul(&s.matrix, &p1)) * &(&inv * &Rational::from_int(r1 as i64).recip())
    } else {
        Rational::zero()
    };
    let beta = if r2 > 0 {
        &linalg::trace(&linalg::mul(&s.matrix, &p2)) * &(&inv * &Rational::from_int(r2 as i64).recip())
    } else {
        Rational::zero()
    };
    let rebuilt = if r1 > 0 && r2 > 0 {
        linalg::add(&linalg::scale(&p1, &alpha), &linalg::scale(&p2, &beta))
    } else if r1 > 0 {
        linalg::scale(&p1, &alpha)
    } else {
        linalg::scale(&p2, &beta)
    };
    let rebuilt = linalg::scale(&rebuilt, &norm_m);
    if rebuilt == s.matrix {
        Some(Decomposition { alpha, beta, rank1: r1, rank2: r2 })
    } else {
        None
    }
}

/// Certifying covectors: the basis plus four seeded random rational ones.
pub fn certifying_covectors(n: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| Rational::from_int((i == j) as i64)).collect())
        .collect();
    let mut rng = crate::ambient::rng_for(seed, &[n as u64, 97]);
    for _ in 0..4 {
        loop {
            let v: Vec<Rational> = (0..n).map(|_| Rational::new(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect();
            if v.iter().any(|x| !x.is_zero()) {
                out.push(v);
                break;
            }
        }
    }
    out
}

/// Decomposition shared by every certifying covector.
pub fn leading_decomposition(p: &SliceOperator, seed: u64) -> Option<Decomposition> {
    let sig = &p.sig;
    let mut found: Option<Decomposition> = None;
    for xi in certifying_covectors(sig.n(), seed) {
        let d = decompose_at(&principal_symbol(p, &xi), sig, p.src.0)?;
        match &found {
            None => found = Some(d),
            Some(f) if f.alpha == d.alpha && f.beta == d.beta => {}
            _ => return None,
        }
    }
    found
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EllipticityTag {
    PositivelyElliptic,
    Elliptic,
    NonElliptic,
}

impl EllipticityTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            EllipticityTag::PositivelyElliptic => "positively-elliptic",
            EllipticityTag::Elliptic => "elliptic",
            EllipticityTag::NonElliptic => "non-elliptic",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EllipticityClass {
    pub tag: EllipticityTag,
    /// Sign of the leading symbol in the `∂ ↦ iξ` convention, when definite.
    pub sign: Option<i32>,
    pub witness: Option<Vec<Rational>>,
}

impl EllipticityClass {
    pub fn is_elliptic(&self) -> bool {
        self.tag != EllipticityTag::NonElliptic
    }
}

/// Ellipticity of a form operator `Λ^k → Λ^k` over the certifying covectors.
pub fn classify(p: &SliceOperator, seed: u64) -> EllipticityClass {
    let sig = &p.sig;
    let xis = certifying_covectors(sig.n(), seed);
    if !sig.is_riemannian() || p.is_zero() {
        return EllipticityClass { tag: EllipticityTag::NonElliptic, sign: None, witness: xis.into_iter().next() };
    }
    let mut signs = Vec::new();
    for xi in &xis {
        let s = principal_symbol(p, xi);
        if s.rows.len() != s.cols.len() || linalg::rank(&s.matrix) < s.rows.len() {
            return EllipticityClass { tag: EllipticityTag::NonElliptic, sign: None, witness: Some(xi.clone()) };
        }
        if let Some(d) = decompose_at(&s, sig, p.src.0) {
            let unit = if (s.order / 2).is_multiple_of(2) { 1 } else { -1 };
            for (c, r) in [(&d.alpha, d.rank1), (&d.beta, d.rank2)] {
                if r > 0 {
                    signs.push(c.signum() * unit);
                }
            }
        } else {
            signs.push(0);
        }
    }
    let definite = !signs.is_empty() && signs.iter().all(|&s| s != 0 && s == signs[0]);
    if definite {
        EllipticityClass { tag: EllipticityTag::PositivelyElliptic, sign: Some(signs[0]), witness: None }
    } else {
        EllipticityClass { tag: EllipticityTag::Elliptic, sign: None, witness: None }
    }
}

/// Closed-form grid: `None` where `k = ℓ + n/2` (the operator vanishes).
pub fn predicted_class(n: i64, k: i64, ell: i64) -> Option<EllipticityTag> {
    if k == ell + n / 2 {
        return None;
    }
    let w = k + ell - n / 2;
    Some(if w == 0 {
        EllipticityTag::NonElliptic
    } else if k < n / 2 - ell || k > n / 2 + ell {
        EllipticityTag::PositivelyElliptic
    } else {
        EllipticityTag::Elliptic
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub n: usize,
    pub k: usize,
    pub ell: i64,
    pub w: i64,
    pub class: EllipticityTag,
    pub predicted_class: Option<EllipticityTag>,
    pub matches: bool,
    pub ratio_ok: bool,
}

/// Classification of `L^ℓ_k` against the closed-form grid, with the
/// `α:β = (n−2k+2ℓ):(n−2k−2ℓ)` ratio checked where both blocks exist.
pub fn classify_grid(sig: &Signature, seed: u64) -> Vec<GridRow> {
    let n = sig.n() as i64;
    let mut rows = Vec::new();
    for k in 0..=sig.n() {
        for ell in 0..=n / 2 {
            let Ok(l) = operators::build_l(sig, k, ell) else { continue };
            let class = classify(&l, seed);
            let predicted = predicted_class(n, k as i64, ell);
            let matches = match predicted {
                Some(p) => p == class.tag,
                None => true,
            };
            let ratio_ok = predicted.is_none() || match leading_decomposition(&l, seed) {
                Some(d) if d.rank1 > 0 && d.rank2 > 0 => {
                    let a = Rational::from_int(n - 2 * k as i64 + 2 * ell);
                    let b = Rational::from_int(n - 2 * k as i64 - 2 * ell);
                    &d.alpha * &b == &d.beta * &a
                }
                Some(_) => true,
                None => l.is_zero(),
            };
            rows.push(GridRow {
                n: sig.n(),
                k,
                ell,
                w: k as i64 + ell - n / 2,
                class: class.tag,
                predicted_class: predicted,
                matches,
                ratio_ok,
            });
        }
    }
    rows
}

fn range_equals_null(a: &Matrix, b: &Matrix, dim: usize) -> bool {
    linalg::is_zero(&linalg::mul(b, a)) && linalg::rank(a) + linalg::rank(b) == dim
}

/// Exactness of `Λ^{k−1} →ε→ Λ^k →σ(L)→ Λ^k →ι→ Λ^{k−1}` at both middle spots.
pub fn detour_exactness(sig: &Signature, k: usize, seed: u64) -> Vec<CheckRecord> {
    let n = sig.n();
    let mut out = Vec::new();
    let l = match operators::build_l_critical(sig, k) {
        Ok(l) => l,
        Err(e) => return vec![CheckRecord::new(format!("detour-exact/k={k}"), "detour complex", Status::Fail).witness(e.to_string())],
    };
    let dim = masks_of_degree(n, k).len();
    let xis: Vec<Vec<Rational>> = certifying_covectors(n, seed).into_iter().skip(n.saturating_sub(1)).take(5).collect();
    let mut ok_src = true;
    let mut ok_dst = true;
    let mut ranks = Vec::new();
    for xi in &xis {
        let s = principal_symbol(&l, xi).matrix;
        let before = if k > 0 { eps_symbol(sig, k - 1, xi) } else { linalg::zeros(dim, 1) };
        let after = if k > 0 { iota_symbol(sig, k, xi) } else { linalg::zeros(1, dim) };
        ok_src &= range_equals_null(&before, &s, dim);
        ok_dst &= range_equals_null(&s, &after, dim);
        ranks.push(linalg::rank(&s));
    }
    let degenerate = 2 * k == n;
    let status = Status::from_bool(if degenerate { l.is_zero() } else { ok_src && ok_dst });
    out.push(
        CheckRecord::new(format!("detour-exact/k={k}"), "the detour sequence is an elliptic complex", status)
            .param("n", n)
            .param("covectors", xis.len())
            .param("symbol-rank", ranks.first().copied().unwrap_or(0))
            .param("degenerate", degenerate),
    );
    if sig.is_riemannian() && !degenerate {
        if let Ok(ls) = operators::build_star_conjugate(sig, k, n as i64 / 2 - k as i64) {
            let m = n - k;
            let mut ok = true;
            for xi in &xis {
                let s = principal_symbol(&ls, xi).matrix;
                let before = if m < n { iota_symbol(sig, m + 1, xi) } else { linalg::zeros(dim, 1) };
                let after = if m < n { eps_symbol(sig, m, xi) } else { linalg::zeros(1, dim) };
                ok &= range_equals_null(&before, &s, dim) && range_equals_null(&s, &after, dim);
            }
            out.push(
                CheckRecord::pass_if(format!("codetour-exact/k={k}"), "the Hodge-dual detour sequence is exact at symbol level", ok)
                    .param("n", n),
            );
        }
    }
    out
}

fn solve_two(s1: &Matrix, s2: &Matrix, target: &Matrix, sig: &Signature, k: usize, xi: &[Rational]) -> Option<(Rational, Rational)> {
    let (p1, p2) = projections(sig, k, xi);
    let coef = |s: &Matrix, p: &Matrix| -> Rational {
        let r = linalg::rank(p);
        if r == 0 {
            return Rational::zero();
        }
        let tp = linalg::trace(&linalg::mul(target, p));
        let sp = linalg::trace(&linalg::mul(s, p));
        if sp.is_zero() {
            Rational::zero()
        } else {
            &tp / &sp
        }
    };
    let a = coef(s1, &p1);
    let b = coef(s2, &p2);
    let lhs = linalg::add(&linalg::scale(s1, &a), &linalg::scale(s2, &b));
    (lhs == *target).then_some((a, b))
}

/// `(a′, b′)` with `σ(a′δd L_k + b′ d G_k) = |ξ|^{2ℓ+2}` and `α` with
/// `σ(α Q_k d δ + δΔ^ℓ d) = |ξ|^{2ℓ+2}`, on five covectors.
pub fn witnesses(sig: &Signature, k: usize, seed: u64) -> Vec<CheckRecord> {
    let n = sig.n();
    let ell = n as i64 / 2 - k as i64;
    let flat = crate::cone::Scale::flat(sig);
    let mut out = Vec::new();
    let built = (
        operators::build_l_critical(sig, k),
        operators::build_g(sig, k, &flat),
        operators::build_q(sig, k, &flat),
    );
    let (Ok(l), Ok(g), Ok(q)) = built else {
        return vec![CheckRecord::new(format!("witness/k={k}"), "graded injective ellipticity", Status::Fail)];
    };
    let dd = SliceOperator::codiff(sig, k + 1, 0).compose(&SliceOperator::d(sig, k, 0));
    let s1_op = dd.compose(&l);
    let s2_op = if k > 0 { Some(SliceOperator::d(sig, k - 1, 0).compose(&g)) } else { None };
    let surj1 = if k > 0 {
        Some(q.compose(&SliceOperator::d(sig, k - 1, 0)).compose(&SliceOperator::codiff(sig, k, 0)))
    } else {
        None
    };
    let lap = operators::delta_d_power(sig, k + 1, 0, 1)
        .add(&SliceOperator::d(sig, k, 0).compose(&SliceOperator::codiff(sig, k + 1, 0)));
    let mut lap_pow = SliceOperator::identity(sig, k + 1, 0);
    for _ in 0..ell {
        lap_pow = lap.compose(&lap_pow);
    }
    let surj2 = SliceOperator::codiff(sig, k + 1, 0).compose(&lap_pow).compose(&SliceOperator::d(sig, k, 0));
    let dim = masks_of_degree(n, k).len();
    let order = 2 * ell as u32 + 2;
    let mut inj: Option<(Rational, Rational)> = None;
    let mut sur: Option<Rational> = None;
    let mut ok_inj = true;
    let mut ok_sur = true;
    let xis: Vec<Vec<Rational>> = certifying_covectors(n, seed).into_iter().skip(n.saturating_sub(1)).take(5).collect();
    for xi in &xis {
        let rows = masks_of_degree(n, k);
        let sym = |op: &SliceOperator| principal_symbol_of_order(op, xi, order, rows.clone(), rows.clone()).matrix;
        let unit = if (order / 2).is_multiple_of(2) { 1 } else { -1 };
        let target = linalg::scale(&linalg::identity(dim), &(&norm_sq(sig, xi).pow(ell as u32 + 1) * &Rational::from_int(unit)));
        let s1 = sym(&s1_op);
        let s2 = s2_op.as_ref().map(sym).unwrap_or_else(|| linalg::zeros(dim, dim));
        match solve_two(&s1, &s2, &target, sig, k, xi) {
            Some(c) if inj.as_ref().is_none_or(|f| *f == c) => inj = Some(c),
            _ => ok_inj = false,
        }
        let t1 = surj1.as_ref().map(sym).unwrap_or_else(|| linalg::zeros(dim, dim));
        let t2 = sym(&surj2);
        let rest = linalg::add(&target, &linalg::scale(&t2, &Rational::from_int(-1)));
        match solve_two(&linalg::zeros(dim, dim), &t1, &rest, sig, k, xi) {
            Some((_, a)) if sur.as_ref().is_none_or(|f| *f == a) => sur = Some(a),
            _ => ok_sur = false,
        }
    }
    let mut r = CheckRecord::pass_if(format!("injective-witness/k={k}"), "(a′δd, b′d) applied to (L_k, G_k) is Δ^{ℓ+1} + LOT", ok_inj && inj.is_some())
        .param("n", n);
    if let Some((a, b)) = inj {
        r = r.constant("a", a).constant("b", b);
    }
    out.push(r);
    let mut r = CheckRecord::pass_if(format!("surjective-witness/k={k}"), "αQ_k dδ + δΔ^ℓ d is Δ^{ℓ+1} + LOT", ok_sur && sur.is_some())
        .param("n", n);
    if let Some(a) = sur {
        r = r.constant("alpha", a);
    }
    out.push(r);
    out
}

/// Symbol-level structural checks: projections and multiplicativity.
pub fn symbol_structure(sig: &Signature, seed: u64) -> Vec<CheckRecord> {
    let n = sig.n();
    let mut out = Vec::new();
    let xis = certifying_covectors(n, seed);
    if sig.is_riemannian() {
        let mut ok = true;
        for k in 0..=n {
            let dim = masks_of_degree(n, k).len();
            for xi in &xis {
                let (p1, p2) = projections(sig, k, xi);
                let p1 = if k == n { linalg::zeros(dim, dim) } else { p1 };
                let p2 = if k == 0 { linalg::zeros(dim, dim) } else { p2 };
                ok &= linalg::add(&p1, &p2) == linalg::identity(dim);
                ok &= linalg::mul(&p1, &p1) == p1 && linalg::mul(&p2, &p2) == p2;
                ok &= linalg::is_zero(&linalg::mul(&p1, &p2));
            }
        }
        out.push(CheckRecord::pass_if("symbol/projections", "ι(ξ)ε(ξ) and ε(ξ)ι(ξ) are complementary projections", ok).param("n", n));
    }
    let mut ok = true;
    let flat = crate::cone::Scale::flat(sig);
    for k in 1..=n / 2 {
        let (Ok(q), Ok(l)) = (operators::build_q(sig, k, &flat), operators::build_l_critical(sig, k - 1)) else {
            ok = false;
            continue;
        };
        let dl = SliceOperator::codiff(sig, k, 0);
        let d = SliceOperator::d(sig, k - 1, 0);
        let comp = dl.compose(&q).compose(&d);
        for xi in xis.iter().take(5) {
            let lhs = principal_symbol(&comp, xi);
            let prod = linalg::mul(
                &linalg::mul(&principal_symbol(&dl, xi).matrix, &principal_symbol(&q, xi).matrix),
                &principal_symbol(&d, xi).matrix,
            );
            ok &= lhs.matrix == prod;
        }
        let _ = l;
    }
    out.push(CheckRecord::pass_if("symbol/multiplicative", "symbol of a composition is the product of symbols", ok).param("n", n));
    out
}

/// Grid, exactness and witness records for one signature.
pub fn symbol_suite(sig: &Signature, seed: u64) -> Vec<CheckRecord> {
    let n = sig.n();
    let mut out = symbol_structure(sig, seed);
    for row in classify_grid(sig, seed) {
        let status = Status::from_bool(row.matches && row.ratio_ok);
        out.push(
            CheckRecord::new(
                format!("classify/k={}/l={}", row.k, row.ell),
                "ellipticity of L^ℓ_k: elliptic iff w ≠ 0, positively iff k ∉ [n/2−ℓ, n/2+ℓ]",
                status,
            )
            .param("n", n)
            .param("w", row.w)
            .param("class", row.class.as_str())
            .param("predicted-class", row.predicted_class.map(|c| c.as_str()).unwrap_or("vanishing"))
            .param("ratio", row.ratio_ok),
        );
    }
    if sig.is_riemannian() {
        for k in 0..=n / 2 {
            out.extend(detour_exactness(sig, k, seed));
        }
        for k in 0..n / 2 {
            out.extend(witnesses(sig, k, seed));
        }
    }
    out
}
