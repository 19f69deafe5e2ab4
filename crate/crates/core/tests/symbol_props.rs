use conformal_detour::operators::SliceOperator;
use conformal_detour::symbols::{
    classify, eps_symbol, iota_symbol, leading_decomposition, linalg, norm_sq, principal_symbol, projections,
};
use conformal_detour::{Rational, Signature};
use proptest::prelude::*;

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn covector(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-5i64..=5, 1i64..=4), n)
        .prop_map(|v| v.into_iter().map(|(a, b)| Rational::new(a, b)).collect::<Vec<_>>())
        .prop_filter("nonzero", |v: &Vec<Rational>| v.iter().any(|x| !x.is_zero()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn projections_split_the_identity(xi in covector(4), k in 0usize..=4) {
        let sig = Signature::riemannian(4);
        let (p1, p2) = projections(&sig, k, &xi);
        let dim = binomial(4, k);
        let sum = match (k, k == 4) {
            (0, _) => p1.clone(),
            (_, true) => p2.clone(),
            _ => linalg::add(&p1, &p2),
        };
        prop_assert_eq!(sum, linalg::identity(dim));
        if k < 4 {
            prop_assert_eq!(linalg::mul(&p1, &p1), p1.clone());
            prop_assert_eq!(linalg::rank(&p1), binomial(3, k));
        }
        if k > 0 {
            prop_assert_eq!(linalg::mul(&p2, &p2), p2.clone());
            prop_assert_eq!(linalg::rank(&p2), binomial(3, k - 1));
        }
        if 0 < k && k < 4 {
            prop_assert!(linalg::is_zero(&linalg::mul(&p1, &p2)));
        }
    }

    #[test]
    fn symbols_of_d_and_codiff(xi in covector(4), k in 0usize..4) {
        let sig = Signature::riemannian(4);
        let d = principal_symbol(&SliceOperator::d(&sig, k, 0), &xi);
        prop_assert_eq!(d.matrix, eps_symbol(&sig, k, &xi));
        let delta = principal_symbol(&SliceOperator::codiff(&sig, k + 1, 0), &xi);
        prop_assert_eq!(delta.matrix, linalg::scale(&iota_symbol(&sig, k + 1, &xi), &Rational::from_int(-1)));
    }

    #[test]
    fn symbol_is_multiplicative(xi in covector(4), k in 0usize..4) {
        let sig = Signature::riemannian(4);
        let d = SliceOperator::d(&sig, k, 0);
        let delta = SliceOperator::codiff(&sig, k + 1, 0);
        let product = principal_symbol(&delta.compose(&d), &xi).matrix;
        let expected = linalg::mul(&principal_symbol(&delta, &xi).matrix, &principal_symbol(&d, &xi).matrix);
        prop_assert_eq!(product, expected);
    }

    #[test]
    fn hodge_laplacian_symbol_is_scalar(xi in covector(4), k in 1usize..4) {
        let sig = Signature::riemannian(4);
        let lap = SliceOperator::codiff(&sig, k + 1, 0)
            .compose(&SliceOperator::d(&sig, k, 0))
            .add(&SliceOperator::d(&sig, k - 1, 0).compose(&SliceOperator::codiff(&sig, k, 0)));
        let s = principal_symbol(&lap, &xi);
        let expected = linalg::scale(&linalg::identity(binomial(4, k)), &(-norm_sq(&sig, &xi)));
        prop_assert_eq!(s.matrix, expected);
    }
}

#[test]
fn decomposition_of_basic_second_order_operators() {
    let sig = Signature::riemannian(4);
    for k in 1..4 {
        let dd = SliceOperator::codiff(&sig, k + 1, 0).compose(&SliceOperator::d(&sig, k, 0));
        let dec = leading_decomposition(&dd, 3).unwrap();
        assert_eq!((dec.alpha, dec.beta), (Rational::from_int(-1), Rational::zero()));
        assert!(!classify(&dd, 3).is_elliptic());
        let lap = dd.add(&SliceOperator::d(&sig, k - 1, 0).compose(&SliceOperator::codiff(&sig, k, 0)));
        assert!(classify(&lap, 3).is_elliptic());
    }
}
