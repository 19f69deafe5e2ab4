use crate::ambient::{mask_indices, sign_before};
use crate::arith::{Mono, Rational, RationalFunction, Signature};
use crate::cone::{masks_of_degree, SliceForm};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// `Σ_α c_α(x) ∂^α`, keyed by the multi-index `α`.
pub type ScalarOp = BTreeMap<Mono, RationalFunction>;

/// A matrix of scalar differential operators between slice form bundles.
///
/// `entries[(I, J)]` maps the `J` input component to the `I` output component.
#[derive(Clone, Debug)]
pub struct SliceOperator {
    pub sig: Signature,
    pub src: (usize, i64),
    pub dst: (usize, i64),
    pub entries: BTreeMap<(u32, u32), ScalarOp>,
}

/// `∂^α f`.
pub fn diff_multi(f: &RationalFunction, alpha: &Mono) -> RationalFunction {
    let mut g = f.clone();
    for (i, &e) in alpha.0.iter().enumerate() {
        for _ in 0..e {
            if g.is_zero() {
                return g;
            }
            g = g.diff(i);
        }
    }
    g
}

fn add_term(op: &mut ScalarOp, alpha: Mono, c: RationalFunction) {
    if c.is_zero() {
        return;
    }
    match op.get_mut(&alpha) {
        Some(v) => *v = v.add(&c),
        None => {
            op.insert(alpha, c);
        }
    }
}

fn mask_sign(sig: &Signature, mask: u32) -> i64 {
    mask_indices(mask).map(|i| sig.eps(i + 1)).product()
}

impl SliceOperator {
    pub fn zero(sig: &Signature, src: (usize, i64), dst: (usize, i64)) -> Self {
        SliceOperator { sig: sig.clone(), src, dst, entries: BTreeMap::new() }
    }

    pub fn identity(sig: &Signature, k: usize, w: i64) -> Self {
        Self::mul_fn(sig, k, w, &RationalFunction::one())
    }

    /// Multiplication by a function.
    pub fn mul_fn(sig: &Signature, k: usize, w: i64, f: &RationalFunction) -> Self {
        let mut op = Self::zero(sig, (k, w), (k, w));
        for m in masks_of_degree(sig.n(), k) {
            let mut s = ScalarOp::new();
            add_term(&mut s, Mono::one(), f.clone());
            op.entries.insert((m, m), s);
        }
        op.normalize()
    }

    /// Exterior derivative on `k`-forms.
    pub fn d(sig: &Signature, k: usize, w: i64) -> Self {
        let n = sig.n();
        let mut op = Self::zero(sig, (k, w), (k + 1, w));
        for m in masks_of_degree(n, k) {
            for i in 0..n {
                if m & (1 << i) != 0 {
                    continue;
                }
                let mut s = ScalarOp::new();
                add_term(&mut s, Mono::var(i), RationalFunction::from_int(sign_before(m, i)));
                op.entries.insert((m | (1 << i), m), s);
            }
        }
        op
    }

    /// Codifferential `δ = −ι(∇)` on `k`-forms.
    pub fn codiff(sig: &Signature, k: usize, w: i64) -> Self {
        let n = sig.n();
        let mut op = Self::zero(sig, (k, w), (k.saturating_sub(1), w));
        for m in masks_of_degree(n, k) {
            for i in mask_indices(m) {
                let mut s = ScalarOp::new();
                let c = -sig.eps(i + 1) * sign_before(m, i);
                add_term(&mut s, Mono::var(i), RationalFunction::from_int(c));
                op.entries.insert((m & !(1 << i), m), s);
            }
        }
        op
    }

    /// Exterior multiplication by a slice 1-form.
    pub fn wedge(sig: &Signature, k: usize, w: i64, omega: &[RationalFunction]) -> Self {
        let n = sig.n();
        let mut op = Self::zero(sig, (k, w), (k + 1, w));
        for m in masks_of_degree(n, k) {
            for (i, c) in omega.iter().enumerate() {
                if m & (1 << i) != 0 || c.is_zero() {
                    continue;
                }
                let mut s = ScalarOp::new();
                let c = if sign_before(m, i) < 0 { c.neg() } else { c.clone() };
                add_term(&mut s, Mono::one(), c);
                op.entries.insert((m | (1 << i), m), s);
            }
        }
        op
    }

    /// Hodge star as an order-zero operator.
    pub fn star(sig: &Signature, k: usize, w: i64) -> Self {
        let n = sig.n();
        let mut op = Self::zero(sig, (k, w), (n - k, w));
        for m in masks_of_degree(n, k) {
            let e = SliceForm::basis(sig, &mask_indices(m).collect::<Vec<_>>(), RationalFunction::one(), w).star();
            for (om, c) in e.comps {
                let mut s = ScalarOp::new();
                add_term(&mut s, Mono::one(), c);
                op.entries.insert((om, m), s);
            }
        }
        op
    }

    /// Drops zero terms and reduces coefficients.
    pub fn normalize(mut self) -> Self {
        let mut out = BTreeMap::new();
        for (k, s) in std::mem::take(&mut self.entries) {
            let s: ScalarOp = s
                .into_iter()
                .map(|(a, c)| (a, c.reduced()))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            if !s.is_empty() {
                out.insert(k, s);
            }
        }
        self.entries = out;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|s| s.values().all(RationalFunction::is_zero))
    }

    pub fn with_weights(mut self, src_w: i64, dst_w: i64) -> Self {
        self.src.1 = src_w;
        self.dst.1 = dst_w;
        self
    }

    /// Highest `|α|` with a nonzero coefficient; `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.entries
            .values()
            .flat_map(|s| s.iter().filter(|(_, c)| !c.is_zero()).map(|(a, _)| a.degree()))
            .max()
    }

    /// Terms of exactly order `m`.
    pub fn part_of_order(&self, m: u32) -> Self {
        let mut out = Self::zero(&self.sig, self.src, self.dst);
        for (k, s) in &self.entries {
            let t: ScalarOp = s.iter().filter(|(a, _)| a.degree() == m).map(|(a, c)| (*a, c.clone())).collect();
            if !t.is_empty() {
                out.entries.insert(*k, t);
            }
        }
        out
    }

    /// Terms of order below `m`.
    pub fn lower_than(&self, m: u32) -> Self {
        let mut out = Self::zero(&self.sig, self.src, self.dst);
        for (k, s) in &self.entries {
            let t: ScalarOp = s.iter().filter(|(a, _)| a.degree() < m).map(|(a, c)| (*a, c.clone())).collect();
            if !t.is_empty() {
                out.entries.insert(*k, t);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.src.0, other.src.0, "source degree mismatch");
        let mut out = self.clone();
        if self.is_zero() {
            out.dst = other.dst;
        }
        for (k, s) in &other.entries {
            let e = out.entries.entry(*k).or_default();
            for (a, c) in s {
                add_term(e, *a, c.clone());
            }
        }
        out.normalize()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Rational::from_int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        for s in out.entries.values_mut() {
            for v in s.values_mut() {
                *v = v.scale(c);
            }
        }
        out.normalize()
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// `c` with `self = c·other`, if any.
    pub fn proportional_to(&self, other: &Self) -> Option<Rational> {
        if other.is_zero() {
            return if self.is_zero() { Some(Rational::zero()) } else { None };
        }
        let (key, s) = other.entries.iter().find(|(_, s)| !s.is_empty())?;
        let (alpha, c0) = s.iter().next()?;
        let mine = self.entries.get(key).and_then(|t| t.get(alpha)).cloned().unwrap_or_default();
        let ratio = mine.div(c0).reduced().as_constant()?;
        if self.equals(&other.scale(&ratio)) {
            Some(ratio)
        } else {
            None
        }
    }

    pub fn apply(&self, u: &SliceForm) -> SliceForm {
        let mut cache: BTreeMap<(u32, Mono), RationalFunction> = BTreeMap::new();
        let mut comps: BTreeMap<u32, RationalFunction> = BTreeMap::new();
        for (&(i, j), s) in &self.entries {
            let f = match u.comps.get(&j) {
                Some(f) => f,
                None => continue,
            };
            for (alpha, c) in s {
                let df = cache.entry((j, *alpha)).or_insert_with(|| diff_multi(f, alpha)).clone();
                if df.is_zero() {
                    continue;
                }
                let e = comps.entry(i).or_default();
                *e = e.add(&c.mul(&df));
            }
        }
        let comps = comps.into_iter().map(|(k, v)| (k, v.reduced())).collect();
        SliceForm::from_comps(&self.sig, self.dst.0, comps, self.dst.1)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.src.0, other.dst.0, "composition degree mismatch");
        let mut out = Self::zero(&self.sig, other.src, self.dst);
        let mut by_row: BTreeMap<u32, Vec<(u32, &ScalarOp)>> = BTreeMap::new();
        for (&(j, k), s) in &other.entries {
            by_row.entry(j).or_default().push((k, s));
        }
        let mut dcache: BTreeMap<(u32, u32, Mono, Mono), RationalFunction> = BTreeMap::new();
        for (&(i, j), p) in &self.entries {
            let rows = match by_row.get(&j) {
                Some(r) => r,
                None => continue,
            };
            for &(k, r) in rows {
                let e = out.entries.entry((i, k)).or_default();
                for (alpha, a) in p {
                    let divs = alpha.divisors();
                    for (beta, b) in r {
                        for gamma in &divs {
                            let db = dcache
                                .entry((j, k, *beta, *gamma))
                                .or_insert_with(|| diff_multi(b, gamma))
                                .clone();
                            if db.is_zero() {
                                continue;
                            }
                            let coef = a.mul(&db).scale(&alpha.binomial(gamma));
                            let rest = alpha.div(gamma).expect("divisor").mul(beta);
                            add_term(e, rest, coef);
                        }
                    }
                }
            }
        }
        out.normalize()
    }

    /// Formal adjoint for the flat pairing `∫⟨u, v⟩`.
    pub fn adjoint(&self) -> Self {
        let n = self.sig.n() as i64;
        let src = (self.dst.0, 2 * self.dst.0 as i64 - n - self.dst.1);
        let dst = (self.src.0, 2 * self.src.0 as i64 - n - self.src.1);
        let mut out = Self::zero(&self.sig, src, dst);
        for (&(i, j), s) in &self.entries {
            let sign = mask_sign(&self.sig, i) * mask_sign(&self.sig, j);
            let e = out.entries.entry((j, i)).or_default();
            for (alpha, c) in s {
                let par = if alpha.degree() % 2 == 0 { 1 } else { -1 };
                for gamma in alpha.divisors() {
                    let rest = alpha.div(&gamma).expect("divisor");
                    let dc = diff_multi(c, &rest);
                    if dc.is_zero() {
                        continue;
                    }
                    let coef = dc.scale(&(alpha.binomial(&gamma) * Rational::from_int(par * sign)));
                    add_term(e, gamma, coef);
                }
            }
        }
        out.normalize()
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.src.0 == self.dst.0 && self.adjoint().equals(self)
    }

    /// Canonical, byte-stable text rendering.
    pub fn render(&self) -> String {
        let names = self.sig.slice_names();
        let mname = |m: u32| -> String {
            let v: Vec<String> = mask_indices(m).map(|i| format!("{}", i + 1)).collect();
            if v.is_empty() {
                "0".into()
            } else {
                v.join(",")
            }
        };
        let mut s = String::new();
        let _ = writeln!(
            s,
            "operator ({},{}) -> ({},{}) signature {},{}",
            self.src.0, self.src.1, self.dst.0, self.dst.1, self.sig.p, self.sig.q
        );
        if self.is_zero() {
            s.push_str("  0\n");
            return s;
        }
        for (&(i, j), op) in &self.entries {
            let _ = write!(s, "  [{}|{}]", mname(i), mname(j));
            for (alpha, c) in op.iter().rev() {
                let d: Vec<String> = alpha
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| if e == 1 { format!("D{}", v + 1) } else { format!("D{}^{}", v + 1, e) })
                    .collect();
                let d = if d.is_empty() { "1".to_string() } else { d.join("") };
                let _ = write!(s, " + ({})*{}", c.render(&names), d);
            }
            s.push('\n');
        }
        s
    }
}
