//! Ambient lifts, slice restrictions, scales and `𝒢`-quotient classes.

mod scale;
mod slice;

pub use scale::{
    default_registry, load_registry, make_y, pair_one_forms, round_constant, slice_images, Scale, ScaleError,
    YTractor, FLAT, ROUND,
};
pub use slice::{masks_of_degree, random_closed_form, random_slice_form, SliceForm};

use crate::ambient::{mask_indices, ops, AmbientForm};
use crate::arith::{Mono, MultiPoly, Rational, RationalFunction, Signature};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConeError {
    #[error("restriction is not proportional to the input: {0}")]
    NotProportional(String),
}

/// Sign constant tying `α` to the `𝕐`-slot: `𝕐α ↔ ε(Y)·lift(α)`.
pub const Y_SLOT_SIGN: i64 = 1;

fn shift_mono(m: &Mono, by: usize) -> Mono {
    let mut out = Mono::one();
    for i in (0..m.0.len() - by).rev() {
        out.0[i + by] = m.0[i];
    }
    out
}

/// Homogenizes a slice polynomial: `p(x/t)·t^D` with `D = deg p`.
fn homogenize(p: &MultiPoly, sig: &Signature) -> (MultiPoly, u32) {
    let d = p.total_degree().unwrap_or(0);
    let terms = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut mm = shift_mono(m, 1);
            mm.0[sig.t()] = (d - m.degree()) as u8;
            (mm, c.clone())
        })
        .collect();
    (MultiPoly::from_terms(terms), d)
}

fn t_pow(sig: &Signature, e: i64) -> RationalFunction {
    let mut m = Mono::one();
    m.0[sig.t()] = e.unsigned_abs() as u8;
    if e >= 0 {
        RationalFunction::over_mono(MultiPoly::monomial(m, Rational::one()), Mono::one())
    } else {
        RationalFunction::over_mono(MultiPoly::one(), m)
    }
}

/// `f(x/t)` as an ambient function of degree 0.
pub fn slice_fn_to_ambient(sig: &Signature, f: &RationalFunction) -> RationalFunction {
    if f.is_zero() {
        return f.clone();
    }
    let (num, dn) = homogenize(f.numerator(), sig);
    let mut out = RationalFunction::from_poly(num).mul(&t_pow(sig, -(dn as i64)));
    let den = f.mono_denominator();
    if !den.is_one() {
        let dm = shift_mono(den, 1);
        out = out.mul(&RationalFunction::over_mono(MultiPoly::one(), dm)).mul(&t_pow(sig, den.degree() as i64));
    }
    for (p, e) in f.factors() {
        let (ph, dp) = homogenize(p, sig);
        out = out.div_poly(&ph, *e).mul(&t_pow(sig, (dp * e) as i64));
    }
    out
}

/// The pulled-back coframe `θ_i = d(xⁱ/t)`.
fn theta(sig: &Signature, i: usize) -> Vec<RationalFunction> {
    let mut v = vec![RationalFunction::zero(); sig.dim()];
    let t = RationalFunction::var(sig.t());
    v[i + 1] = RationalFunction::one().div(&t);
    v[sig.t()] = RationalFunction::var(i + 1).neg().div(&t.mul(&t));
    v
}

/// `U = t^w·π*u` with `π(t, x, ρ) = x/t`; `ι(X)U = 0` and `ℒ_X U = wU`.
pub fn lift(u: &SliceForm, w: i64) -> AmbientForm {
    let sig = &u.sig;
    let tw = t_pow(sig, w);
    let thetas: Vec<Vec<RationalFunction>> = (0..sig.n()).map(|i| theta(sig, i)).collect();
    let mut out = AmbientForm::zero(sig, u.degree);
    for (&mask, f) in &u.comps {
        let c = slice_fn_to_ambient(sig, f).mul(&tw);
        let mut g = AmbientForm::scalar(sig, c);
        let idx: Vec<usize> = mask_indices(mask).collect();
        for &i in idx.iter().rev() {
            g = ops::eps(&thetas[i], &g, None);
        }
        out = out.add(&g);
    }
    out.degree = u.degree;
    out.with_weight(Some(w - u.degree as i64))
}

/// Lift adapted to a scale: `σ^w·π*u`, which agrees with [`lift`] of the
/// flat trivialization along the cone.
pub fn lift_scaled(u: &SliceForm, w: i64, scale: &Scale) -> AmbientForm {
    let sig = &u.sig;
    let base = lift(u, 0);
    let ratio = scale.sigma_fn().div(&RationalFunction::var(sig.t()));
    let factor = if w >= 0 { ratio.pow(w as u32) } else { RationalFunction::one().div(&ratio.pow((-w) as u32)) };
    base.mul_fn(&factor.mul(&t_pow(sig, w))).with_weight(Some(w - u.degree as i64))
}

/// Pullback of an ambient form along a map given by coordinate images in
/// `target_dim` variables; returns components keyed by target masks.
pub fn pullback(f: &AmbientForm, images: &[RationalFunction], target_dim: usize) -> BTreeMap<u32, RationalFunction> {
    let jac: Vec<Vec<RationalFunction>> =
        images.iter().map(|g| (0..target_dim).map(|i| g.diff(i)).collect()).collect();
    let mut wedge_cache: BTreeMap<u32, BTreeMap<u32, RationalFunction>> = BTreeMap::new();
    let mut out: BTreeMap<u32, RationalFunction> = BTreeMap::new();
    for (&mask, g) in &f.comps {
        let w = wedge_cache.entry(mask).or_insert_with(|| {
            let mut acc: BTreeMap<u32, RationalFunction> = BTreeMap::new();
            acc.insert(0, RationalFunction::one());
            for a in mask_indices(mask) {
                let mut next: BTreeMap<u32, RationalFunction> = BTreeMap::new();
                for (&m, c) in &acc {
                    for (i, j) in jac[a].iter().enumerate() {
                        if j.is_zero() || m & (1 << i) != 0 {
                            continue;
                        }
                        let above = (m >> (i + 1)).count_ones();
                        let t = c.mul(j);
                        let t = if above % 2 == 1 { t.neg() } else { t };
                        let e = next.entry(m | (1 << i)).or_default();
                        *e = e.add(&t);
                    }
                }
                acc = next.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            }
            acc
        });
        if w.is_empty() {
            continue;
        }
        let gi = g.substitute(images);
        if gi.is_zero() {
            continue;
        }
        for (&m, c) in w.iter() {
            let e = out.entry(m).or_default();
            *e = e.add(&gi.mul(c));
        }
    }
    out.into_iter()
        .map(|(k, v)| (k, v.reduced()))
        .filter(|(_, v)| !v.is_zero())
        .collect()
}

fn slice_image_fns(sig: &Signature) -> Vec<RationalFunction> {
    slice_images(sig).into_iter().map(RationalFunction::from_poly).collect()
}

/// Pullback along `x ↦ (1, x, −|x|²_ε/2)`.
pub fn restrict(f: &AmbientForm) -> SliceForm {
    let sig = &f.sig;
    let comps = pullback(f, &slice_image_fns(sig), sig.n());
    let w = f.weight.map(|w| w + f.degree as i64).unwrap_or(0);
    SliceForm::from_comps(sig, f.degree, comps, w)
}

/// Pullback along the `σ = 1` section `x ↦ φ(x)/s(x)`: the `σ`-trivialization.
pub fn restrict_scaled(f: &AmbientForm, scale: &Scale) -> SliceForm {
    let sig = &f.sig;
    if scale.is_flat(sig) {
        return restrict(f);
    }
    let s = scale.slice_factor(sig);
    let images: Vec<RationalFunction> = slice_image_fns(sig).iter().map(|g| g.div(&s)).collect();
    let comps = pullback(f, &images, sig.n());
    let w = f.weight.map(|w| w + f.degree as i64).unwrap_or(0);
    SliceForm::from_comps(sig, f.degree, comps, w)
}

/// Converts a `σ`-trivialized section of weight `w` to the flat trivialization.
pub fn to_flat_trivialization(u: &SliceForm, scale: &Scale) -> SliceForm {
    let s = scale.slice_factor(&u.sig);
    let f = if u.weight >= 0 { s.pow(u.weight as u32) } else { RationalFunction::one().div(&s.pow((-u.weight) as u32)) };
    u.mul_fn(&f)
}

/// Converts a flat-trivialized section to the `σ`-trivialization.
pub fn from_flat_trivialization(u: &SliceForm, scale: &Scale) -> SliceForm {
    let s = scale.slice_factor(&u.sig);
    let f = if u.weight >= 0 { RationalFunction::one().div(&s.pow(u.weight as u32)) } else { s.pow((-u.weight) as u32) };
    u.mul_fn(&f)
}

/// A section of `𝒢^k(w)`: an ambient form modulo `ε(X)(…) + Q(…)`.
#[derive(Clone, Debug)]
pub struct GClass {
    pub rep: AmbientForm,
}

impl GClass {
    pub fn new(rep: AmbientForm) -> Self {
        GClass { rep }
    }

    /// Canonical form: pullback to the cone chart `(t, x)`, `ρ = −|x|²_ε/(2t)`.
    pub fn canonical(&self) -> BTreeMap<u32, RationalFunction> {
        let sig = &self.rep.sig;
        let mut images: Vec<RationalFunction> = (0..=sig.n()).map(RationalFunction::var).collect();
        images.push(RationalFunction::over_mono(
            sig.x_norm_sq().scale(&Rational::new(-1, 2)),
            Mono::var(sig.t()),
        ));
        pullback(&self.rep, &images, sig.n() + 1)
    }

    pub fn equals(&self, other: &GClass) -> bool {
        GClass::new(self.rep.sub(&other.rep)).is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().is_empty()
    }
}

/// `d̃` on quotient classes.
pub fn tilde_d(v: &GClass) -> GClass {
    GClass::new(ops::ext_d(&v.rep))
}

/// `δ̃` on forms with `ι(X)F ≡ 0 mod Q`.
pub fn tilde_delta(f: &AmbientForm) -> AmbientForm {
    ops::codiff(f)
}

/// `(α, μ)` of a class at a scale: `α = ι(X)U`, `μ = U − ε(Y)ι(X)U`, restricted.
pub fn decompose_g(u: &GClass, scale: &Scale) -> (SliceForm, SliceForm) {
    let sig = &u.rep.sig;
    let y = make_y(sig, scale).expect("valid scale").y;
    let ix = ops::iota_x(&u.rep);
    let alpha = restrict_scaled(&ix, scale).scale(&Rational::from_int(Y_SLOT_SIGN));
    let mu = restrict_scaled(&u.rep.sub(&ops::eps_form(&y, &ix)), scale);
    (alpha, mu)
}

/// Reassembles `ε(Y)·lift(α) + lift(μ)` in the flat scale.
pub fn assemble_g(alpha: &SliceForm, mu: &SliceForm, w: i64) -> GClass {
    let sig = &mu.sig;
    let y = make_y(sig, &Scale::flat(sig)).expect("flat scale").y;
    let a = ops::eps_form(&y, &lift(alpha, w)).scale(&Rational::from_int(Y_SLOT_SIGN));
    GClass::new(a.add(&lift(mu, w)))
}

/// `(μ, ρ)` of an `𝓕`-section `F` (with `ι(X)F ≡ 0`): `μ = F|`, `ρ = ι(Y)F|`.
pub fn decompose_f(f: &AmbientForm, scale: &Scale) -> (SliceForm, SliceForm) {
    let sig = &f.sig;
    let y = make_y(sig, scale).expect("valid scale").y;
    let mu = restrict_scaled(f, scale);
    let rho = restrict_scaled(&ops::iota_form(&y, f), scale);
    (mu, rho)
}

/// `c` with `a = c·b`, if the forms are proportional.
pub fn proportionality(a: &SliceForm, b: &SliceForm) -> Option<Rational> {
    if b.is_zero() {
        return if a.is_zero() { Some(Rational::zero()) } else { None };
    }
    let (mask, bf) = b.comps.iter().next()?;
    let ratio = a.get(*mask).div(bf).reduced();
    let c = ratio.as_constant()?;
    if a.equals(&b.scale(&c)) {
        Some(c)
    } else {
        None
    }
}

/// Closed form `2(n/2 + ℓ − k)(ℓ + 1)` of the splitting constant (even `n`).
pub fn splitting_constant_formula(n: i64, k: i64, ell: i64) -> Rational {
    Rational::from_int(2 * (n / 2 + ell - k) * (ell + 1))
}

/// Measures `q^k ι(Ð)ε(X) q_k = c·id` on trial forms; requires even `n`.
pub fn splitting_constant(sig: &Signature, k: usize, ell: i64, seed: u64, trials: usize) -> Result<Rational, ConeError> {
    let n = sig.n() as i64;
    assert!(n % 2 == 0, "integer weights need even n");
    let w = k as i64 + ell - n / 2;
    let mut rng = crate::ambient::checks::rng_for(seed, &[k as u64, ell as u64, 31]);
    let mut found: Option<Rational> = None;
    for _ in 0..trials {
        let u = random_slice_form(sig, k, w, 3, &mut rng);
        let big_u = lift(&u, w);
        let v = ops::iota_dirac(&ops::eps_x(&big_u));
        let r = restrict(&v);
        let c = proportionality(&r, &u).ok_or_else(|| ConeError::NotProportional(r.render()))?;
        match &found {
            None => found = Some(c),
            Some(f) if *f == c => {}
            Some(f) => return Err(ConeError::NotProportional(format!("{f} vs {c}"))),
        }
    }
    Ok(found.unwrap_or_default())
}

/// Schouten tensor and `J` of the metric `s⁻²·g_flat` on the slice.
pub fn schouten(sig: &Signature, scale: &Scale) -> (Vec<Vec<RationalFunction>>, RationalFunction) {
    let n = sig.n();
    let s = scale.slice_factor(sig);
    let dphi: Vec<RationalFunction> = (0..n).map(|i| s.diff(i).div(&s).neg()).collect();
    let mut norm = RationalFunction::zero();
    for i in 0..n {
        let t = dphi[i].mul(&dphi[i]);
        norm = if sig.eps(i + 1) > 0 { norm.add(&t) } else { norm.sub(&t) };
    }
    let half = Rational::new(1, 2);
    let mut p = vec![vec![RationalFunction::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let hess = dphi[i].diff(j);
            let mut v = hess.neg().add(&dphi[i].mul(&dphi[j]));
            if i == j {
                let g0 = norm.scale(&half);
                v = if sig.eps(i + 1) > 0 { v.sub(&g0) } else { v.add(&g0) };
            }
            p[i][j] = v.reduced();
        }
    }
    let s2 = s.mul(&s);
    let mut j = RationalFunction::zero();
    for i in 0..n {
        let t = p[i][i].mul(&s2);
        j = if sig.eps(i + 1) > 0 { j.add(&t) } else { j.sub(&t) };
    }
    (p, j.reduced())
}

/// True iff `P = (J/n)·g` with `J` constant: constant sectional curvature.
pub fn is_constant_curvature(sig: &Signature, scale: &Scale) -> Option<Rational> {
    let (p, j) = schouten(sig, scale);
    let jc = j.as_constant()?;
    let n = sig.n();
    let s = scale.slice_factor(sig);
    let g_factor = RationalFunction::one().div(&s.mul(&s));
    let coef = jc.clone() / Rational::from_int(n as i64);
    for (i, row) in p.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            let expect = if i == k { g_factor.scale(&coef).scale(&Rational::from_int(sig.eps(i + 1))) } else { RationalFunction::zero() };
            if !v.sub(&expect).is_zero() {
                return None;
            }
        }
    }
    Some(jc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::checks::rng_for;

    fn sig4() -> Signature {
        Signature::riemannian(4)
    }

    #[test]
    fn lift_examples() {
        let s = sig4();
        let one = SliceForm::basis(&s, &[], RationalFunction::one(), 0);
        assert_eq!(lift(&one, 0).get(0), RationalFunction::one());
        let dx = SliceForm::basis(&s, &[0], RationalFunction::one(), 1);
        let u = lift(&dx, 1);
        assert_eq!(u.get(1 << 1), RationalFunction::one());
        let expect = RationalFunction::var(1).div(&RationalFunction::var(0)).neg();
        assert_eq!(u.get(1), expect);
        assert!(ops::iota_x(&u).is_zero());
    }

    #[test]
    fn restrict_lift_round_trip() {
        let mut rng = rng_for(3, &[]);
        for sig in [sig4(), Signature::new(3, 1)] {
            for k in 0..=3 {
                for w in [-2i64, 0, 1, 3] {
                    let u = random_slice_form(&sig, k, w, 3, &mut rng);
                    let big = lift(&u, w);
                    assert!(ops::iota_x(&big).is_zero());
                    assert!(ops::lie_x(&big).equals(&big.scale(&Rational::from_int(w))));
                    assert!(restrict(&big).equals(&u));
                    assert!(restrict(&ops::mul_q(&big)).is_zero());
                    assert!(restrict(&ops::eps_x(&big)).is_zero());
                }
            }
        }
    }

    #[test]
    fn y_tractor_invariants() {
        for sig in [sig4(), Signature::new(3, 1), Signature::riemannian(6)] {
            for sc in default_registry(&sig) {
                let y = make_y(&sig, &sc).unwrap();
                let xy = y.x_dot_y().sub(&RationalFunction::one());
                assert!(sig.reduce_mod_cone(&xy).unwrap().is_zero());
                assert!(sig.reduce_mod_cone(&y.y_dot_y()).unwrap().is_zero());
            }
        }
        let s = sig4();
        let y = make_y(&s, &Scale::flat(&s)).unwrap();
        assert_eq!(y.y.get(1), RationalFunction::one().div(&RationalFunction::var(0)));
        assert!(y.i_norm.is_zero());
    }

    #[test]
    fn round_scale_is_unit_sphere() {
        for n in [4usize, 6] {
            let sig = Signature::riemannian(n);
            let j = is_constant_curvature(&sig, &Scale::round(&sig)).unwrap();
            assert_eq!(j, Rational::new(n as i64, 2));
            assert_eq!(is_constant_curvature(&sig, &Scale::flat(&sig)).unwrap(), Rational::zero());
        }
    }

    #[test]
    fn registry_parsing() {
        let s = sig4();
        let reg = load_registry(&s, "# scales\nflat = t\nround = t - 1/2*r\n").unwrap();
        assert_eq!(reg, default_registry(&s));
        assert!(matches!(Scale::parse_entry(&s, "bad = t^2"), Err(ScaleError::NotDegreeOne(_))));
        assert!(matches!(Scale::parse_entry(&s, "oops"), Err(ScaleError::Parse(_))));
    }

    #[test]
    fn decompose_examples_and_tdform() {
        let s = sig4();
        let flat = Scale::flat(&s);
        let mut rng = rng_for(5, &[]);
        for k in 1..=3usize {
            for w in [-1i64, 0, 2] {
                let mu = random_slice_form(&s, k, w, 3, &mut rng);
                let alpha = random_slice_form(&s, k - 1, w, 3, &mut rng);
                let (a0, m0) = decompose_g(&GClass::new(lift(&mu, w)), &flat);
                assert!(a0.is_zero() && m0.equals(&mu));
                let u = assemble_g(&alpha, &mu, w);
                let (a1, m1) = decompose_g(&u, &flat);
                assert!(a1.equals(&alpha) && m1.equals(&mu));
                let (a2, m2) = decompose_g(&tilde_d(&u), &flat);
                let expect_a = mu.scale(&Rational::from_int(w)).sub(&alpha.d());
                assert!(a2.equals(&expect_a), "{} vs {}", a2.render(), expect_a.render());
                assert!(m2.equals(&mu.d()));
                assert!(tilde_d(&tilde_d(&u)).is_zero());
            }
        }
    }

    #[test]
    fn gclass_quotient() {
        let s = sig4();
        let mut rng = rng_for(9, &[]);
        let g = crate::ambient::random_form(&s, 1, 0, &mut rng);
        let h = crate::ambient::random_form(&s, 2, -1, &mut rng);
        let z = GClass::new(ops::eps_x(&g).add(&ops::mul_q(&h)));
        assert!(z.is_zero());
        assert!(tilde_d(&z).is_zero());
    }

    #[test]
    fn splitting_constants_n4() {
        let s = sig4();
        for (k, ell) in [(1usize, 1i64), (0, 0), (1, 0), (2, 0), (0, 1), (1, -1), (3, 1)] {
            let c = splitting_constant(&s, k, ell, 11, 3).unwrap();
            assert_eq!(c, splitting_constant_formula(4, k as i64, ell), "k={k} l={ell}");
        }
        assert_eq!(splitting_constant_formula(4, 1, 1), Rational::from_int(8));
    }
}
