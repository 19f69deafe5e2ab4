use conformal_detour::cone::{random_slice_form, SliceForm};
use conformal_detour::operators::{extract, Certify, SliceOperator};
use conformal_detour::{Mono, MultiPoly, Rational, RationalFunction, Signature};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sig_strategy() -> impl Strategy<Value = Signature> {
    prop_oneof![Just(Signature::riemannian(4)), Just(Signature::new(3, 1))]
}

/// Polynomial coefficient in the four slice variables, degree ≤ 2.
fn coefficient() -> impl Strategy<Value = RationalFunction> {
    prop::collection::vec((prop::collection::vec(0u8..=1, 4), -3i64..=3), 1..4).prop_map(|terms| {
        RationalFunction::from_poly(MultiPoly::from_terms(
            terms.into_iter().map(|(e, c)| (Mono::from_exps(&e), Rational::from_int(c))).collect(),
        ))
    })
}

/// `δ∘f∘d + g` on `k`-forms: a second-order operator with variable coefficients.
fn operator(sig: &Signature, k: usize, f: &RationalFunction, g: &RationalFunction) -> SliceOperator {
    let inner = SliceOperator::mul_fn(sig, k + 1, 0, f).compose(&SliceOperator::d(sig, k, 0));
    SliceOperator::codiff(sig, k + 1, 0).compose(&inner).add(&SliceOperator::mul_fn(sig, k, 0, g))
}

fn trial(sig: &Signature, k: usize, seed: u64) -> SliceForm {
    random_slice_form(sig, k, 0, 3, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn adjoint_is_an_involution(sig in sig_strategy(), k in 0usize..3, f in coefficient(), g in coefficient()) {
        let p = operator(&sig, k, &f, &g);
        prop_assert!(p.adjoint().adjoint().equals(&p));
    }

    #[test]
    fn adjoint_reverses_composition(sig in sig_strategy(), k in 0usize..3, f in coefficient(), g in coefficient()) {
        let p = operator(&sig, k, &f, &g);
        let q = operator(&sig, k, &g, &f);
        prop_assert!(p.compose(&q).adjoint().equals(&q.adjoint().compose(&p.adjoint())));
    }

    #[test]
    fn d_and_codiff_are_formal_adjoints(sig in sig_strategy(), k in 0usize..4) {
        prop_assert!(SliceOperator::d(&sig, k, 0).adjoint().equals(&SliceOperator::codiff(&sig, k + 1, 0)));
    }

    #[test]
    fn composition_matches_application(k in 0usize..3, f in coefficient(), g in coefficient(), seed in any::<u64>()) {
        let sig = Signature::riemannian(4);
        let p = operator(&sig, k, &f, &g);
        let q = operator(&sig, k, &g, &f);
        let u = trial(&sig, k, seed);
        prop_assert!(p.compose(&q).apply(&u).equals(&p.apply(&q.apply(&u))));
    }

    #[test]
    fn extraction_recovers_the_operator(sig in sig_strategy(), k in 0usize..3, f in coefficient(), g in coefficient()) {
        let p = operator(&sig, k, &f, &g);
        let got = extract(&sig, (k, 0), (k, 0), 2, Certify::All, |u| p.apply(u)).unwrap();
        prop_assert!(got.equals(&p));
    }

    #[test]
    fn extraction_rejects_underestimated_order(k in 0usize..3, f in coefficient()) {
        let sig = Signature::riemannian(4);
        let p = operator(&sig, k, &f, &RationalFunction::zero());
        prop_assume!(p.order() == Some(2));
        prop_assert!(extract(&sig, (k, 0), (k, 0), 1, Certify::All, |u| p.apply(u)).is_err());
    }
}

#[test]
fn hodge_laplacian_on_functions_is_minus_sum_of_second_derivatives() {
    let sig = Signature::riemannian(4);
    let lap = SliceOperator::codiff(&sig, 1, 0).compose(&SliceOperator::d(&sig, 0, 0));
    for seed in 0..4 {
        let u = trial(&sig, 0, seed);
        let f = u.get(0);
        let mut expected = RationalFunction::zero();
        for i in 0..4 {
            expected = expected.sub(&f.diff(i).diff(i));
        }
        assert!(lap.apply(&u).get(0).sub(&expected).reduced().is_zero());
    }
}

#[test]
fn render_is_stable_and_distinguishes_operators() {
    let sig = Signature::riemannian(4);
    let a = SliceOperator::d(&sig, 1, 0).render();
    assert_eq!(a, SliceOperator::d(&sig, 1, 0).render());
    assert_ne!(a, SliceOperator::d(&sig, 1, 0).scale(&Rational::from_int(2)).render());
}
