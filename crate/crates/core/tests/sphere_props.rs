use conformal_detour::sphere::{
    curvature_invariants, four_u_closed_form, hp_audit, q_omega_eigenvalue, sphere_audit_suite, u_eigenvalue, SphereError,
};
use conformal_detour::Rational;
use proptest::prelude::*;

/// `4U` on `(r, s)`-forms of `S^p × S^q`, `p = n/2 − 1`, computed in floating point
/// from the Ricci curvature `(m − 1)g` of the unit sphere `S^m`.
fn four_u_float(n: usize, r: usize, s: usize) -> f64 {
    let (p, q, nf) = ((n / 2 - 1) as f64, (n / 2 + 1) as f64, n as f64);
    let scalar = p * (p - 1.0) + q * (q - 1.0);
    let j = scalar / (2.0 * (nf - 1.0));
    let schouten_p = (p - 1.0 - j) / (nf - 2.0);
    let schouten_q = (q - 1.0 - j) / (nf - 2.0);
    4.0 * (j - 2.0 * (r as f64 * schouten_p + s as f64 * schouten_q))
}

fn to_f64(r: &Rational) -> f64 {
    r.to_string().split_once('/').map_or_else(
        || r.to_string().parse().unwrap(),
        |(a, b)| a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap(),
    )
}

const TOL: f64 = 1e-12;

#[test]
fn worked_eigenvalues() {
    assert_eq!(u_eigenvalue(4, 1, 0).unwrap(), Rational::from_int(8));
    assert_eq!(u_eigenvalue(4, 0, 1).unwrap(), Rational::zero());
    assert_eq!(u_eigenvalue(6, 1, 1).unwrap(), Rational::new(16, 5));
    assert_eq!(four_u_closed_form(8, 0), Rational::new(-8, 7));
    let g = curvature_invariants(4).unwrap();
    assert_eq!((g.sc, g.j), (Rational::from_int(6), Rational::one()));
}

#[test]
fn audits_at_four_and_six() {
    let a = hp_audit(4).unwrap();
    assert_eq!(a.nonnegative_branch, Some(true));
    assert_eq!(a.min_four_u, Rational::zero());
    let a = hp_audit(6).unwrap();
    assert_eq!(a.min_four_u, Rational::new(-4, 5));
    assert_eq!(a.gap_branch, Some(true));
    assert!(a.admissible_below_two.is_empty());
    assert!(a.holds());
}

#[test]
fn suite_passes_and_rejects_bad_input() {
    let recs = sphere_audit_suite(&[4, 6, 8, 10, 12]);
    assert!(recs.iter().all(|r| r.is_ok()));
    assert!(matches!(u_eigenvalue(6, 3, 0), Err(SphereError::BadFormType { .. })));
    assert!(matches!(hp_audit(7), Err(SphereError::BadDimension(7))));
}

proptest! {
    #[test]
    fn engine_matches_independent_curvature_computation(half in 2usize..=20) {
        let n = 2 * half;
        for r in 0..half {
            let s = half - 1 - r;
            let exact = u_eigenvalue(n, r, s).unwrap();
            prop_assert!((to_f64(&exact) - four_u_float(n, r, s)).abs() < TOL);
        }
    }

    #[test]
    fn spectral_bounds_hold(half in 2usize..=20) {
        let n = 2 * half;
        let a = hp_audit(n).unwrap();
        prop_assert!(a.min_above_minus_two);
        prop_assert!(a.min_four_u > Rational::from_int(-2));
        prop_assert!(a.holds());
        let top = four_u_closed_form(n, half - 1);
        prop_assert_eq!(top, Rational::new(6 * n as i64, n as i64 - 1));
        prop_assert_eq!(q_omega_eigenvalue(n).unwrap(), Rational::new(3 * n as i64, 2 * (n as i64 - 1)));
    }
}
