use conformal_detour::{Mono, MultiPoly, Rational, RationalFunction, Signature};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Rational::new(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

/// Polynomials in `nvars` variables with up to four terms of degree ≤ 3.
fn poly(nvars: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0u8..=2, nvars), -5i64..=5), 0..4).prop_map(|terms| {
        MultiPoly::from_terms(terms.into_iter().map(|(e, c)| (Mono::from_exps(&e), Rational::from_int(c))).collect())
    })
}

proptest! {
    #[test]
    fn rational_field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
    }

    #[test]
    fn rational_inverse(a in nonzero_rational()) {
        prop_assert!((&a * &a.recip()).is_one());
        prop_assert_eq!(Rational::parse(&a.to_string()), Some(a));
    }

    #[test]
    fn rational_order_matches_cross_multiplication(a in rational(), b in rational()) {
        let lhs = &a.numer() * &b.denom();
        let rhs = &b.numer() * &a.denom();
        prop_assert_eq!(a.cmp(&b), lhs.cmp(&rhs));
    }

    #[test]
    fn poly_ring_axioms(p in poly(3), q in poly(3), r in poly(3)) {
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert_eq!(p.add(&q).sub(&q), p.clone());
        prop_assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn derivative_is_a_derivation(p in poly(3), q in poly(3), i in 0usize..3) {
        prop_assert_eq!(p.mul(&q).diff(i), p.diff(i).mul(&q).add(&p.mul(&q.diff(i))));
    }

    #[test]
    fn exact_division_inverts_multiplication(p in poly(3), q in poly(3)) {
        prop_assume!(!q.is_zero());
        prop_assert_eq!(p.mul(&q).div_exact(&q), Some(p));
    }

    #[test]
    fn evaluation_is_a_ring_map(p in poly(2), q in poly(2), x in rational(), y in rational()) {
        let pt = [x, y];
        prop_assert_eq!(p.mul(&q).eval(&pt), &p.eval(&pt) * &q.eval(&pt));
        prop_assert_eq!(p.add(&q).eval(&pt), &p.eval(&pt) + &q.eval(&pt));
    }

    #[test]
    fn rational_function_quotient_rule(p in poly(2), q in poly(2)) {
        prop_assume!(!q.is_zero());
        let f = RationalFunction::from_poly(p.clone()).div(&RationalFunction::from_poly(q.clone()));
        let back = f.mul(&RationalFunction::from_poly(q.clone())).reduced();
        prop_assert_eq!(back, RationalFunction::from_poly(p).reduced());
    }

    #[test]
    fn cone_reduction_kills_multiples_of_q(p in poly(6)) {
        let sig = Signature::riemannian(4);
        let f = RationalFunction::from_poly(p.mul(&sig.q_poly()));
        prop_assert!(sig.reduce_mod_cone(&f).unwrap().is_zero());
    }

    #[test]
    fn cone_reduction_is_idempotent_and_additive(p in poly(6), q in poly(6)) {
        let sig = Signature::new(3, 1);
        let red = |x: &MultiPoly| sig.reduce_mod_cone(&RationalFunction::from_poly(x.clone())).unwrap();
        let rp = red(&p);
        prop_assert!(sig.reduce_mod_cone(&rp).unwrap().sub(&rp).reduced().is_zero());
        prop_assert!(red(&p.add(&q)).sub(&rp.add(&red(&q))).reduced().is_zero());
    }
}

#[test]
fn reduction_examples() {
    let sig = Signature::riemannian(4);
    // Q = 2tρ + |x|², so tρ ≡ −|x|²/2 on the cone.
    let t_rho = MultiPoly::var(sig.t()).mul(&MultiPoly::var(sig.rho()));
    let reduced = sig.reduce_mod_cone(&RationalFunction::from_poly(t_rho)).unwrap();
    let expected = RationalFunction::from_poly(sig.x_norm_sq().scale(&Rational::new(-1, 2)));
    assert!(reduced.sub(&expected).reduced().is_zero());
}
