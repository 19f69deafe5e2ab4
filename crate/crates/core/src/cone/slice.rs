use crate::ambient::{mask_indices, sign_before};
use crate::arith::{Mono, MultiPoly, Rational, RationalFunction, Signature};
use rand::Rng;
use std::collections::BTreeMap;

/// A weighted k-form on the slice, coefficients in `x¹..xⁿ` (variables `0..n`).
#[derive(Clone, Debug)]
pub struct SliceForm {
    pub sig: Signature,
    pub degree: usize,
    pub comps: BTreeMap<u32, RationalFunction>,
    pub weight: i64,
}

impl SliceForm {
    pub fn zero(sig: &Signature, degree: usize, weight: i64) -> Self {
        SliceForm { sig: sig.clone(), degree, comps: BTreeMap::new(), weight }
    }

    /// `f dx^{i₁}∧…∧dx^{i_k}` with slice indices `0..n` in any order.
    pub fn basis(sig: &Signature, indices: &[usize], f: RationalFunction, weight: i64) -> Self {
        let mut mask = 0u32;
        let mut sign = 1;
        for &i in indices {
            assert!(mask & (1 << i) == 0, "repeated index");
            if (mask >> (i + 1)).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= 1 << i;
        }
        let mut z = Self::zero(sig, indices.len(), weight);
        let f = if sign < 0 { f.neg() } else { f };
        if !f.is_zero() {
            z.comps.insert(mask, f);
        }
        z
    }

    pub fn from_comps(sig: &Signature, degree: usize, comps: BTreeMap<u32, RationalFunction>, weight: i64) -> Self {
        let comps = comps.into_iter().filter(|(_, f)| !f.is_zero()).collect();
        SliceForm { sig: sig.clone(), degree, comps, weight }
    }

    pub fn n(&self) -> usize {
        self.sig.n()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(RationalFunction::is_zero)
    }

    pub fn get(&self, mask: u32) -> RationalFunction {
        self.comps.get(&mask).cloned().unwrap_or_default()
    }

    pub fn map(&self, f: impl Fn(&RationalFunction) -> RationalFunction) -> Self {
        let comps = self.comps.iter().map(|(k, v)| (*k, f(v))).collect();
        Self::from_comps(&self.sig, self.degree, comps, self.weight)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(
            self.degree == other.degree || self.is_zero() || other.is_zero(),
            "degree mismatch"
        );
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut comps = self.comps.clone();
        for (k, v) in &other.comps {
            let e = comps.entry(*k).or_default();
            *e = e.add(v);
        }
        Self::from_comps(&self.sig, degree, comps, self.weight)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(RationalFunction::neg)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|f| f.scale(c))
    }

    pub fn mul_fn(&self, g: &RationalFunction) -> Self {
        self.map(|f| f.mul(g))
    }

    pub fn with_weight(mut self, w: i64) -> Self {
        self.weight = w;
        self
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Exterior derivative.
    pub fn d(&self) -> Self {
        let n = self.n();
        let mut comps: BTreeMap<u32, RationalFunction> = BTreeMap::new();
        for (&mask, g) in &self.comps {
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    continue;
                }
                let dg = g.diff(i);
                if dg.is_zero() {
                    continue;
                }
                let dg = if sign_before(mask, i) < 0 { dg.neg() } else { dg };
                let e = comps.entry(mask | (1 << i)).or_default();
                *e = e.add(&dg);
            }
        }
        Self::from_comps(&self.sig, self.degree + 1, comps, self.weight)
    }

    /// Codifferential `δ = −ι(∇)` for the flat metric of signature `(p, q)`.
    pub fn codiff(&self) -> Self {
        let mut comps: BTreeMap<u32, RationalFunction> = BTreeMap::new();
        for (&mask, g) in &self.comps {
            for i in mask_indices(mask) {
                let dg = g.diff(i);
                if dg.is_zero() {
                    continue;
                }
                let sign = -self.sig.eps(i + 1) * sign_before(mask, i);
                let t = if sign < 0 { dg.neg() } else { dg };
                let e = comps.entry(mask & !(1 << i)).or_default();
                *e = e.add(&t);
            }
        }
        Self::from_comps(&self.sig, self.degree.saturating_sub(1), comps, self.weight)
    }

    /// Exterior multiplication by a slice 1-form with components `ω_i`.
    pub fn wedge_one(&self, omega: &[RationalFunction]) -> Self {
        let mut comps: BTreeMap<u32, RationalFunction> = BTreeMap::new();
        for (&mask, g) in &self.comps {
            for (i, w) in omega.iter().enumerate() {
                if mask & (1 << i) != 0 || w.is_zero() {
                    continue;
                }
                let t = w.mul(g);
                let t = if sign_before(mask, i) < 0 { t.neg() } else { t };
                let e = comps.entry(mask | (1 << i)).or_default();
                *e = e.add(&t);
            }
        }
        Self::from_comps(&self.sig, self.degree + 1, comps, self.weight)
    }

    /// Hodge star of the flat slice metric, `α∧★β = ⟨α,β⟩ vol`.
    pub fn star(&self) -> Self {
        let n = self.n();
        let full = (1u32 << n) - 1;
        let mut comps = BTreeMap::new();
        for (&mask, g) in &self.comps {
            let comp = full & !mask;
            let mut sign: i64 = mask_indices(mask).map(|i| self.sig.eps(i + 1)).product();
            // sign of the permutation (I, I^c)
            for i in mask_indices(mask) {
                if (comp & ((1u32 << i) - 1)).count_ones() % 2 == 1 {
                    sign = -sign;
                }
            }
            comps.insert(comp, if sign < 0 { g.neg() } else { g.clone() });
        }
        Self::from_comps(&self.sig, n - self.degree, comps, self.weight)
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let names = self.sig.slice_names();
        self.comps
            .iter()
            .map(|(mask, f)| {
                let b: Vec<String> = mask_indices(*mask).map(|i| format!("d{}", names[i])).collect();
                if b.is_empty() {
                    format!("[{}]", f.render(&names))
                } else {
                    format!("[{}] {}", f.render(&names), b.join("^"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// All increasing `k`-subsets of `0..n` as masks, in ascending mask order.
pub fn masks_of_degree(n: usize, k: usize) -> Vec<u32> {
    let mut v: Vec<u32> = (0..(1u32 << n)).filter(|m| m.count_ones() as usize == k).collect();
    v.sort();
    v
}

/// Random slice form with polynomial coefficients of degree `≤ max_deg`.
pub fn random_slice_form<R: Rng>(sig: &Signature, k: usize, w: i64, max_deg: u32, rng: &mut R) -> SliceForm {
    let n = sig.n();
    let masks = masks_of_degree(n, k);
    let pool = Mono::all_up_to_degree(n, max_deg);
    let mut comps = BTreeMap::new();
    let count = rng.gen_range(1..=masks.len().min(3));
    for _ in 0..count {
        let mask = masks[rng.gen_range(0..masks.len())];
        let mut terms = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let m = pool[rng.gen_range(0..pool.len())];
            let c = match rng.gen_range(-3i64..=3) {
                0 => 1,
                c => c,
            };
            terms.push((m, Rational::from_int(c)));
        }
        comps.insert(mask, RationalFunction::from_poly(MultiPoly::from_terms(terms)));
    }
    SliceForm::from_comps(sig, k, comps, w)
}

/// Random closed slice form `dv`, `v` of degree `k − 1`.
pub fn random_closed_form<R: Rng>(sig: &Signature, k: usize, w: i64, max_deg: u32, rng: &mut R) -> SliceForm {
    assert!(k >= 1, "closed trial forms need k ≥ 1");
    loop {
        let v = random_slice_form(sig, k - 1, w, max_deg + 1, rng);
        let dv = v.d();
        if !dv.is_zero() {
            return dv.with_weight(w);
        }
    }
}
