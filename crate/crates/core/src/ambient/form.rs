use crate::arith::{Mono, MultiPoly, Rational, RationalFunction, Signature};
use rand::Rng;
use std::collections::BTreeMap;

/// A k-form on flat `ℝ^{p+1,q+1}` with rational-function coefficients.
///
/// Components are keyed by the bitmask of a strictly increasing index tuple.
/// `weight` is the `∇_X`-weight when known.
#[derive(Clone, Debug)]
pub struct AmbientForm {
    pub sig: Signature,
    pub degree: usize,
    pub comps: BTreeMap<u32, RationalFunction>,
    pub weight: Option<i64>,
}

/// `(-1)^{#{B ∈ I : B < A}}`.
pub(crate) fn sign_before(mask: u32, a: usize) -> i64 {
    if (mask & ((1u32 << a) - 1)).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub(crate) fn mask_indices(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1u32 << i) != 0)
}

impl AmbientForm {
    pub fn zero(sig: &Signature, degree: usize) -> Self {
        AmbientForm { sig: sig.clone(), degree, comps: BTreeMap::new(), weight: None }
    }

    pub fn scalar(sig: &Signature, f: RationalFunction) -> Self {
        let mut z = Self::zero(sig, 0);
        z.weight = f.homogeneous_degree();
        if !f.is_zero() {
            z.comps.insert(0, f);
        }
        z
    }

    /// The basis form `dx^{A₁}∧…∧dx^{A_k}` times `f`; indices may be unsorted.
    pub fn basis(sig: &Signature, indices: &[usize], f: RationalFunction) -> Self {
        let mut mask = 0u32;
        let mut sign = 1i64;
        for &a in indices {
            assert!(mask & (1 << a) == 0, "repeated index");
            if (mask >> (a + 1)).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= 1 << a;
        }
        let mut z = Self::zero(sig, indices.len());
        z.weight = f.homogeneous_degree();
        let f = if sign < 0 { f.neg() } else { f };
        if !f.is_zero() {
            z.comps.insert(mask, f);
        }
        z
    }

    pub fn with_weight(mut self, w: Option<i64>) -> Self {
        self.weight = w;
        self
    }

    pub fn dim(&self) -> usize {
        self.sig.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(|f| f.is_zero())
    }

    pub fn get(&self, mask: u32) -> RationalFunction {
        self.comps.get(&mask).cloned().unwrap_or_default()
    }

    pub(crate) fn accumulate(acc: &mut BTreeMap<u32, RationalFunction>, mask: u32, f: RationalFunction) {
        if f.is_zero() {
            return;
        }
        match acc.get_mut(&mask) {
            Some(g) => *g = g.add(&f),
            None => {
                acc.insert(mask, f);
            }
        }
    }

    pub(crate) fn from_acc(
        sig: &Signature,
        degree: usize,
        acc: BTreeMap<u32, RationalFunction>,
        weight: Option<i64>,
    ) -> Self {
        let comps = acc.into_iter().filter(|(_, f)| !f.is_zero()).collect();
        AmbientForm { sig: sig.clone(), degree, comps, weight }
    }

    /// Applies `f` to every coefficient.
    pub fn map(&self, f: impl Fn(&RationalFunction) -> RationalFunction) -> Self {
        let comps = self
            .comps
            .iter()
            .map(|(k, v)| (*k, f(v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        AmbientForm { sig: self.sig.clone(), degree: self.degree, comps, weight: self.weight }
    }

    fn check_compat(&self, other: &Self) {
        assert_eq!(self.sig, other.sig, "signature mismatch");
        assert!(
            self.degree == other.degree || self.is_zero() || other.is_zero(),
            "degree mismatch: {} vs {}",
            self.degree,
            other.degree
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compat(other);
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut acc = self.comps.clone();
        for (k, v) in &other.comps {
            Self::accumulate(&mut acc, *k, v.clone());
        }
        let weight = match (self.weight, other.weight) {
            (a, b) if a == b => a,
            (a, _) if other.is_zero() => a,
            (_, b) if self.is_zero() => b,
            _ => None,
        };
        Self::from_acc(&self.sig, degree, acc, weight)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|f| f.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|f| f.scale(c))
    }

    pub fn mul_fn(&self, g: &RationalFunction) -> Self {
        let mut out = self.map(|f| f.mul(g));
        out.weight = match (self.weight, g.homogeneous_degree()) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        out
    }

    /// Exact equality of all components.
    pub fn equals(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Every component reduced modulo `(Q)`.
    pub fn reduce_mod_cone(&self) -> Self {
        let sig = self.sig.clone();
        self.map(|f| sig.reduce_mod_cone(f).expect("chart violation"))
    }

    /// True iff `self − other ∈ (Q)` componentwise.
    pub fn equals_mod_q(&self, other: &Self) -> bool {
        self.sub(other).reduce_mod_cone().is_zero()
    }

    /// Common homogeneity degree of all coefficients, if any.
    pub fn infer_weight(&self) -> Option<i64> {
        let mut w = None;
        for f in self.comps.values() {
            let d = f.homogeneous_degree()?;
            match w {
                None => w = Some(d),
                Some(x) if x == d => {}
                _ => return None,
            }
        }
        w
    }

    /// Canonical text rendering.
    pub fn render(&self) -> String {
        let names = self.sig.ambient_names();
        let idx = |i: usize| names[i].clone();
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (mask, f) in &self.comps {
            let basis: Vec<String> = mask_indices(*mask).map(|i| format!("d{}", idx(i))).collect();
            let b = if basis.is_empty() { String::new() } else { format!(" {}", basis.join("^")) };
            parts.push(format!("[{}]{}", f.render(&names), b));
        }
        parts.join(" + ")
    }
}

/// Random polynomial of total degree exactly `d` in the ambient variables.
pub fn random_homogeneous_poly<R: Rng>(sig: &Signature, d: u32, terms: usize, rng: &mut R) -> MultiPoly {
    let pool = Mono::all_of_degree(sig.dim(), d);
    let mut out = Vec::new();
    for _ in 0..terms {
        let m = pool[rng.gen_range(0..pool.len())];
        let mut c = rng.gen_range(-3i64..=3);
        if c == 0 {
            c = 1;
        }
        out.push((m, Rational::from_int(c)));
    }
    MultiPoly::from_terms(out)
}

/// Random homogeneous coefficient of degree `w`, using `t`-denominators if `w < 0`.
pub fn random_homogeneous_fn<R: Rng>(sig: &Signature, w: i64, rng: &mut R) -> RationalFunction {
    let shift: i64 = if w < 0 { -w + rng.gen_range(0..2) } else { 0 };
    let d = (w + shift) as u32;
    let terms = rng.gen_range(1..=3);
    let num = random_homogeneous_poly(sig, d, terms, rng);
    let mut den = Mono::one();
    den.0[sig.t()] = shift as u8;
    RationalFunction::over_mono(num, den)
}

fn random_mask<R: Rng>(dim: usize, k: usize, rng: &mut R) -> u32 {
    let mut idx: Vec<usize> = (0..dim).collect();
    for i in 0..k {
        let j = rng.gen_range(i..dim);
        idx.swap(i, j);
    }
    idx[..k].iter().fold(0u32, |m, &i| m | (1 << i))
}

/// Random k-form homogeneous of `∇_X`-weight `w`.
pub fn random_form<R: Rng>(sig: &Signature, k: usize, w: i64, rng: &mut R) -> AmbientForm {
    let dim = sig.dim();
    let mut acc = BTreeMap::new();
    let count = rng.gen_range(1..=3);
    for _ in 0..count {
        let mask = random_mask(dim, k, rng);
        AmbientForm::accumulate(&mut acc, mask, random_homogeneous_fn(sig, w, rng));
    }
    AmbientForm::from_acc(sig, k, acc, Some(w))
}

/// Random k-form with polynomial coefficients of mixed degrees `0..=3`.
pub fn random_poly_form<R: Rng>(sig: &Signature, k: usize, rng: &mut R) -> AmbientForm {
    let dim = sig.dim();
    let mut acc = BTreeMap::new();
    let count = rng.gen_range(1..=3);
    for _ in 0..count {
        let mask = random_mask(dim, k, rng);
        for d in 0..=3u32 {
            if rng.gen_bool(0.6) {
                let p = random_homogeneous_poly(sig, d, rng.gen_range(1..=2), rng);
                AmbientForm::accumulate(&mut acc, mask, RationalFunction::from_poly(p));
            }
        }
    }
    AmbientForm::from_acc(sig, k, acc, None)
}
