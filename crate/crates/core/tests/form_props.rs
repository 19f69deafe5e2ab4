use conformal_detour::ambient::ops;
use conformal_detour::ambient::random_form;
use conformal_detour::cone::{lift, random_slice_form, restrict, SliceForm};
use conformal_detour::{Rational, RationalFunction, Signature};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sig_strategy() -> impl Strategy<Value = Signature> {
    prop_oneof![Just(Signature::riemannian(4)), Just(Signature::new(3, 1)), Just(Signature::riemannian(6))]
}

fn slice_form(sig: &Signature, k: usize, seed: u64) -> SliceForm {
    random_slice_form(sig, k, 0, 3, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn permutation_sign(p: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn slice_d_and_codiff_square_to_zero(sig in sig_strategy(), k in 0usize..4, seed in any::<u64>()) {
        let u = slice_form(&sig, k.min(sig.n()), seed);
        prop_assert!(u.d().d().is_zero());
        prop_assert!(u.codiff().codiff().is_zero());
    }

    #[test]
    fn basis_sign_is_permutation_sign(perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle(), len in 1usize..=4) {
        let sig = Signature::riemannian(4);
        let idx = &perm[..len];
        let mut sorted = idx.to_vec();
        sorted.sort_unstable();
        let one = RationalFunction::one();
        let a = SliceForm::basis(&sig, idx, one.clone(), 0);
        let b = SliceForm::basis(&sig, &sorted, one, 0).scale(&Rational::from_int(permutation_sign(idx)));
        prop_assert!(a.equals(&b));
    }

    #[test]
    fn star_squares_to_a_sign(sig in sig_strategy(), k in 0usize..=6, seed in any::<u64>()) {
        let n = sig.n();
        let k = k.min(n);
        let u = slice_form(&sig, k, seed);
        let exponent = k * (n - k) + sig.q;
        let sign = if exponent % 2 == 0 { 1 } else { -1 };
        prop_assert!(u.star().star().equals(&u.scale(&Rational::from_int(sign))));
    }

    #[test]
    fn codiff_is_conjugate_of_d(seed in any::<u64>(), k in 1usize..=4) {
        // δ = (−1)^{n(k+1)+1} ★d★ on k-forms in Riemannian dimension n = 4.
        let sig = Signature::riemannian(4);
        let u = slice_form(&sig, k, seed);
        let sign = if (4 * (k + 1) + 1) % 2 == 0 { 1 } else { -1 };
        prop_assert!(u.codiff().equals(&u.star().d().star().scale(&Rational::from_int(sign))));
    }

    #[test]
    fn restrict_inverts_lift(sig in sig_strategy(), k in 0usize..3, w in -3i64..=2, seed in any::<u64>()) {
        let u = slice_form(&sig, k, seed).with_weight(w);
        let back = restrict(&lift(&u, w));
        prop_assert!(back.equals(&u));
    }

    #[test]
    fn ambient_complexes(k in 0usize..4, w in -2i64..=2, seed in any::<u64>()) {
        let sig = Signature::riemannian(4);
        let f = random_form(&sig, k, w, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(ops::ext_d(&ops::ext_d(&f)).is_zero());
        prop_assert!(ops::codiff(&ops::codiff(&f)).is_zero());
        prop_assert!(ops::iota_x(&ops::iota_x(&f)).is_zero());
        // {ι(X), ε(X)} = |X|² = Q
        let anti = ops::iota_x(&ops::eps_x(&f)).add(&ops::eps_x(&ops::iota_x(&f)));
        prop_assert!(anti.equals(&ops::mul_q(&f)));
    }

    #[test]
    fn bochner_and_form_laplacians_agree_on_flat_space(k in 0usize..4, seed in any::<u64>()) {
        let sig = Signature::new(3, 1);
        let f = random_form(&sig, k, 1, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(ops::bochner_lap(&f).equals(&ops::form_lap(&f)));
    }
}
