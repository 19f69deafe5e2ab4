//! Primitive ambient operators in null coordinates.

use super::form::{mask_indices, sign_before, AmbientForm};
use crate::arith::{Rational, RationalFunction, Signature};
use std::collections::BTreeMap;

fn shift(w: Option<i64>, by: i64) -> Option<i64> {
    w.map(|x| x + by)
}

/// `X♭_A = h_{AB}x^B`.
pub fn x_flat(sig: &Signature) -> Vec<RationalFunction> {
    (0..sig.dim())
        .map(|a| {
            let (b, s) = sig.raise(a);
            RationalFunction::var(b).scale(&Rational::from_int(s))
        })
        .collect()
}

/// `X^A = x^A`.
pub fn x_vector(sig: &Signature) -> Vec<RationalFunction> {
    (0..sig.dim()).map(RationalFunction::var).collect()
}

/// Raises the index of a 1-form: `ω^A = h^{AB}ω_B`.
pub fn raise_one_form(sig: &Signature, w: &[RationalFunction]) -> Vec<RationalFunction> {
    (0..sig.dim())
        .map(|a| {
            let (b, s) = sig.raise(a);
            w[b].scale(&Rational::from_int(s))
        })
        .collect()
}

/// Components of a 1-form as a dense vector.
pub fn one_form_components(f: &AmbientForm) -> Vec<RationalFunction> {
    assert_eq!(f.degree, 1, "expected a 1-form");
    (0..f.dim()).map(|a| f.get(1 << a)).collect()
}

/// Exterior derivative `d̃`.
pub fn ext_d(f: &AmbientForm) -> AmbientForm {
    let dim = f.dim();
    let mut acc = BTreeMap::new();
    for (&mask, g) in &f.comps {
        for a in 0..dim {
            if mask & (1 << a) != 0 {
                continue;
            }
            let dg = g.diff(a);
            if dg.is_zero() {
                continue;
            }
            let dg = if sign_before(mask, a) < 0 { dg.neg() } else { dg };
            AmbientForm::accumulate(&mut acc, mask | (1 << a), dg);
        }
    }
    AmbientForm::from_acc(&f.sig, f.degree + 1, acc, shift(f.weight, -1))
}

/// Exterior multiplication by a 1-form given by components `ω_A`.
pub fn eps(omega: &[RationalFunction], f: &AmbientForm, wshift: Option<i64>) -> AmbientForm {
    let dim = f.dim();
    let mut acc = BTreeMap::new();
    for (&mask, g) in &f.comps {
        for (a, w) in omega.iter().enumerate().take(dim) {
            if mask & (1 << a) != 0 || w.is_zero() {
                continue;
            }
            let t = w.mul(g);
            let t = if sign_before(mask, a) < 0 { t.neg() } else { t };
            AmbientForm::accumulate(&mut acc, mask | (1 << a), t);
        }
    }
    let weight = match (f.weight, wshift) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    };
    AmbientForm::from_acc(&f.sig, f.degree + 1, acc, weight)
}

/// Interior multiplication by a vector `v^A` in the first slot.
pub fn iota(v: &[RationalFunction], f: &AmbientForm, wshift: Option<i64>) -> AmbientForm {
    let mut acc = BTreeMap::new();
    for (&mask, g) in &f.comps {
        for a in mask_indices(mask) {
            if v[a].is_zero() {
                continue;
            }
            let t = v[a].mul(g);
            let t = if sign_before(mask, a) < 0 { t.neg() } else { t };
            AmbientForm::accumulate(&mut acc, mask & !(1 << a), t);
        }
    }
    let weight = match (f.weight, wshift) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    };
    AmbientForm::from_acc(&f.sig, f.degree.saturating_sub(1), acc, weight)
}

/// Exterior multiplication by a 1-form `AmbientForm`.
pub fn eps_form(omega: &AmbientForm, f: &AmbientForm) -> AmbientForm {
    eps(&one_form_components(omega), f, omega.weight.map(|w| w + 1))
}

/// Interior multiplication by the metric dual of a 1-form `AmbientForm`.
pub fn iota_form(omega: &AmbientForm, f: &AmbientForm) -> AmbientForm {
    let v = raise_one_form(&f.sig, &one_form_components(omega));
    iota(&v, f, omega.weight.map(|w| w + 1))
}

/// `ε(X)`.
pub fn eps_x(f: &AmbientForm) -> AmbientForm {
    eps(&x_flat(&f.sig), f, Some(1))
}

/// `ι(X)`.
pub fn iota_x(f: &AmbientForm) -> AmbientForm {
    iota(&x_vector(&f.sig), f, Some(1))
}

/// Codifferential `δ̃ = −ι(∇)`.
pub fn codiff(f: &AmbientForm) -> AmbientForm {
    let sig = &f.sig;
    let mut acc = BTreeMap::new();
    for (&mask, g) in &f.comps {
        for a in mask_indices(mask) {
            let (b, s) = sig.raise(a);
            let dg = g.diff(b);
            if dg.is_zero() {
                continue;
            }
            let sign = -s * sign_before(mask, a);
            let t = if sign < 0 { dg.neg() } else { dg };
            AmbientForm::accumulate(&mut acc, mask & !(1 << a), t);
        }
    }
    AmbientForm::from_acc(sig, f.degree.saturating_sub(1), acc, shift(f.weight, -1))
}

/// Scalar Laplacian `−h^{AB}∂_A∂_B` of a coefficient.
pub fn scalar_lap(sig: &Signature, g: &RationalFunction) -> RationalFunction {
    let mut acc = g.diff(sig.t()).diff(sig.rho()).scale(&Rational::from_int(2));
    for a in 1..=sig.n() {
        let t = g.diff(a).diff(a);
        acc = if sig.eps(a) > 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    acc.neg()
}

/// Bochner Laplacian: `−h^{AB}∂_A∂_B` componentwise.
pub fn bochner_lap(f: &AmbientForm) -> AmbientForm {
    let sig = f.sig.clone();
    let mut out = f.map(|g| scalar_lap(&sig, g));
    out.weight = shift(f.weight, -2);
    out
}

/// Form Laplacian `Δ̃ = δ̃d̃ + d̃δ̃`, computed literally.
pub fn form_lap(f: &AmbientForm) -> AmbientForm {
    codiff(&ext_d(f)).add(&ext_d(&codiff(f))).with_weight(shift(f.weight, -2))
}

/// `Δ̃`; equal to the Bochner Laplacian in the flat model and computed that way.
pub fn lap(f: &AmbientForm) -> AmbientForm {
    bochner_lap(f)
}

/// `Δ̃^m`.
pub fn lap_pow(f: &AmbientForm, m: usize) -> AmbientForm {
    let mut g = f.clone();
    for _ in 0..m {
        g = lap(&g);
    }
    g
}

/// Multiplication by `Q`.
pub fn mul_q(f: &AmbientForm) -> AmbientForm {
    let q = RationalFunction::from_poly(f.sig.q_poly());
    let mut out = f.map(|g| g.mul(&q));
    out.weight = shift(f.weight, 2);
    out
}

/// `∇_X`: the Euler operator on coefficients.
pub fn nabla_x(f: &AmbientForm) -> AmbientForm {
    let dim = f.dim();
    f.map(|g| g.euler(dim))
}

/// `ℒ_X = ι(X)d̃ + d̃ι(X)`.
pub fn lie_x(f: &AmbientForm) -> AmbientForm {
    iota_x(&ext_d(f)).add(&ext_d(&iota_x(f))).with_weight(f.weight)
}

/// `ℒ_X* = δ̃ε(X) + ε(X)δ̃`.
pub fn lie_x_star(f: &AmbientForm) -> AmbientForm {
    codiff(&eps_x(f)).add(&eps_x(&codiff(f))).with_weight(f.weight)
}

/// `(n + 2∇_X − 2)F`.
fn weight_factor(f: &AmbientForm) -> AmbientForm {
    let n = f.sig.n() as i64;
    f.scale(&Rational::from_int(n - 2)).add(&nabla_x(f).scale(&Rational::from_int(2)))
}

/// `ε(Ð) = d̃(n + 2E − 2) + ε(X)Δ̃`.
pub fn eps_dirac(f: &AmbientForm) -> AmbientForm {
    ext_d(&weight_factor(f))
        .add(&eps_x(&lap(f)))
        .with_weight(shift(f.weight, -1))
}

/// `ι(Ð) = −δ̃(n + 2E − 2) + ι(X)Δ̃`.
pub fn iota_dirac(f: &AmbientForm) -> AmbientForm {
    iota_x(&lap(f))
        .sub(&codiff(&weight_factor(f)))
        .with_weight(shift(f.weight, -1))
}

/// Tractor-D on a form-valued tensor component: `∂_B((n+2∇_X−2)F) + X_B Δ_B F`.
pub fn tractor_d(f: &AmbientForm, b: usize) -> AmbientForm {
    let xb = x_flat(&f.sig)[b].clone();
    let g = weight_factor(f);
    let d = g.map(|c| c.diff(b));
    d.add(&bochner_lap(f).mul_fn(&xb)).with_weight(shift(f.weight, -1))
}

/// `□_m = D^{A₁}⋯D^{A_{m−1}} Δ_B D_{A_{m−1}}⋯D_{A₁}` with all slots contracted.
pub fn tractor_box(f: &AmbientForm, m: usize) -> AmbientForm {
    assert!(m >= 1, "box index must be positive");
    let sig = f.sig.clone();
    let dim = sig.dim();
    // family[i] carries free indices encoded base `dim`, innermost last
    let mut family: Vec<AmbientForm> = vec![f.clone()];
    for _ in 1..m {
        let mut next = Vec::with_capacity(family.len() * dim);
        for g in &family {
            for b in 0..dim {
                next.push(tractor_d(g, b));
            }
        }
        family = next;
    }
    let mut family: Vec<AmbientForm> = family.iter().map(bochner_lap).collect();
    for _ in 1..m {
        let mut next = Vec::with_capacity(family.len() / dim);
        for chunk in family.chunks(dim) {
            let mut acc = AmbientForm::zero(&sig, f.degree);
            for (a, b, s) in sig.inverse_metric() {
                let t = tractor_d(&chunk[a], b);
                acc = if s > 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            next.push(acc);
        }
        family = next;
    }
    family.pop().unwrap().with_weight(shift(f.weight, -2 * m as i64))
}
