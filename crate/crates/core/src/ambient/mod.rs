//! Exterior calculus on flat `ℝ^{p+1,q+1}` and its tangential operators.

pub mod checks;
mod expr;
mod form;
pub mod ops;

pub use expr::{AmbientError, OpAtom, OpExpr};
pub use form::{random_form, random_homogeneous_fn, random_homogeneous_poly, random_poly_form, AmbientForm};
pub(crate) use form::{mask_indices, sign_before};
pub use checks::rng_for;

#[cfg(test)]
mod tests {
    use super::checks::*;
    use super::ops::*;
    use super::*;
    use crate::arith::{Rational, RationalFunction, Signature};
    use crate::report::failures;

    #[test]
    fn lap_of_q_and_dq() {
        let s = Signature::riemannian(4);
        let q = AmbientForm::scalar(&s, RationalFunction::from_poly(s.q_poly()));
        let l = lap(&q);
        assert_eq!(l.get(0).as_constant(), Some(Rational::from_int(-12)));
        let dq = ext_d(&q);
        let two_x: Vec<_> = x_flat(&s).iter().map(|c| c.scale(&Rational::from_int(2))).collect();
        for (a, c) in two_x.iter().enumerate() {
            assert_eq!(&dq.get(1 << a), c);
        }
        let dt = AmbientForm::basis(&s, &[0], RationalFunction::one());
        assert_eq!(iota_x(&dt).get(0), RationalFunction::var(0));
    }

    #[test]
    fn superalgebra_n4_riemannian() {
        let recs = check_superalgebra(&Signature::riemannian(4), 7, 3);
        let bad = failures(&recs);
        assert!(bad.is_empty(), "{:#?}", bad);
        assert_eq!(recs.iter().filter(|r| r.id.starts_with("table1")).count(), 16);
        assert_eq!(recs.iter().filter(|r| r.id.starts_with("table2")).count(), 32);
    }

    #[test]
    fn tangential_and_dd0_n4() {
        let s = Signature::riemannian(4);
        let bad: Vec<_> = check_tangential_suite(&s, 3, 2).into_iter().filter(|r| !r.is_ok()).collect();
        assert!(bad.is_empty(), "{:#?}", bad);
        for (k, w) in [(0, 0), (2, -1), (1, 1)] {
            let recs = check_dd0(&s, k, w, 5, 2);
            assert!(recs.iter().all(|r| r.is_ok()), "{:#?}", recs);
        }
        for ell in 0..=2 {
            let recs = check_domino(&s, ell, 1, 5, 2);
            assert!(recs.iter().all(|r| r.is_ok()), "{:#?}", recs);
        }
    }
}
