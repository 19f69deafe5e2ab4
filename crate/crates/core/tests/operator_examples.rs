use conformal_detour::cone::{random_slice_form, SliceForm};
use conformal_detour::operators::{build_l, build_order_n, SliceOperator};
use conformal_detour::{Rational, RationalFunction, Signature};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn trials(sig: &Signature, k: usize, w: i64) -> Vec<SliceForm> {
    (0..3).map(|s| random_slice_form(sig, k, w, 4, &mut ChaCha8Rng::seed_from_u64(100 + s))).collect()
}

/// `−Σ ∂ᵢ² f`.
fn neg_laplacian(f: &RationalFunction, n: usize) -> RationalFunction {
    (0..n).fold(RationalFunction::zero(), |acc, i| acc.sub(&f.diff(i).diff(i)))
}

/// `δd` on 1-forms in flat Riemannian coordinates: `(δdu)_j = Σᵢ ∂ᵢ(∂ⱼuᵢ − ∂ᵢuⱼ)`.
fn maxwell(u: &SliceForm) -> Vec<RationalFunction> {
    let n = u.n();
    (0..n)
        .map(|j| {
            (0..n).fold(RationalFunction::zero(), |acc, i| {
                let ui = u.get(1 << i);
                let uj = u.get(1 << j);
                acc.add(&ui.diff(j).diff(i)).sub(&uj.diff(i).diff(i))
            })
        })
        .collect()
}

#[test]
fn maxwell_operator_in_dimension_four() {
    let sig = Signature::riemannian(4);
    let l = build_l(&sig, 1, 1).unwrap();
    assert_eq!(l.order(), Some(2));
    for u in trials(&sig, 1, 0) {
        let got = l.apply(&u);
        for (j, expected) in maxwell(&u).iter().enumerate() {
            let want = expected.scale(&Rational::from_int(8));
            assert!(got.get(1 << j).sub(&want).reduced().is_zero(), "component {j}");
        }
    }
}

#[test]
fn critical_gjms_operator_in_dimension_four() {
    let sig = Signature::riemannian(4);
    let l = build_l(&sig, 0, 2).unwrap();
    assert_eq!(l.order(), Some(4));
    assert!(l.is_self_adjoint());
    for u in trials(&sig, 0, 0) {
        let f = u.get(0);
        let want = neg_laplacian(&neg_laplacian(&f, 4), 4).scale(&Rational::from_int(24));
        assert!(l.apply(&u).get(0).sub(&want).reduced().is_zero());
    }
}

#[test]
fn order_zero_members_are_multiples_of_the_identity() {
    for n in [4usize, 6] {
        let sig = Signature::riemannian(n);
        for k in 0..n / 2 {
            let l = build_l(&sig, k, 0).unwrap();
            let w = k as i64 - n as i64 / 2;
            let c = l.proportional_to(&SliceOperator::identity(&sig, k, w));
            assert_eq!(c, Some(Rational::from_int(2 * (n as i64 / 2 - k as i64))), "n={n} k={k}");
        }
    }
}

#[test]
fn maxwell_operator_annihilates_exact_forms() {
    let sig = Signature::riemannian(4);
    let l = build_l(&sig, 1, 1).unwrap();
    let d0 = SliceOperator::d(&sig, 0, 0);
    assert!(l.compose(&d0).is_zero());
}

#[test]
fn order_n_operator_is_fourth_order_and_self_adjoint() {
    let sig = Signature::riemannian(4);
    let op = build_order_n(&sig, 1).unwrap();
    assert_eq!(op.order(), Some(4));
    assert!(op.is_self_adjoint());
}
