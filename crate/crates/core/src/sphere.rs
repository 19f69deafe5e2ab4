//! Exact spectral data for the product of unit spheres `S^p × S^q` with
//! `p = n/2 − 1`, `q = n/2 + 1`, and the operator `U = J − 2P♯`.

use crate::arith::Rational;
use crate::report::{CheckRecord, Status};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SphereError {
    #[error("dimension {0} must be even and at least 4")]
    BadDimension(usize),
    #[error("form type ({r},{s}) is not admissible for n = {n}")]
    BadFormType { n: usize, r: usize, s: usize },
    #[error("4U at n = {n}, (r,s) = ({r},{s}): curvature data gives {engine}, closed form gives {closed}")]
    MismatchWithClosedForm { n: usize, r: usize, s: usize, engine: Rational, closed: Rational },
}

/// Curvature data of `S^p × S^q`, unit radii.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductSphereGeom {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub ricci_p: Rational,
    pub ricci_q: Rational,
    pub sc: Rational,
    pub j: Rational,
    pub lambda_p: Rational,
    pub lambda_q: Rational,
}

/// Bidegree `(r, s)` of a form on the product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FormType {
    pub r: usize,
    pub s: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralRecord {
    pub n: usize,
    pub form: FormType,
    pub four_u_engine: Rational,
    pub four_u_closed: Rational,
    pub matches: bool,
    /// Admissible form-Laplacian eigenvalues on this type.
    pub laplacian_spectrum: String,
}

fn int(n: i64) -> Rational {
    Rational::from_int(n)
}

fn check_n(n: usize) -> Result<(), SphereError> {
    if n < 4 || n % 2 == 1 {
        return Err(SphereError::BadDimension(n));
    }
    Ok(())
}

/// `J = (n² − 2n + 4)/(4(n − 1))`.
pub fn j_closed_form(n: usize) -> Rational {
    let n = n as i64;
    Rational::new(n * n - 2 * n + 4, 4 * (n - 1))
}

/// `16r/(n − 2) − 2(n − 4)/(n − 1)`.
pub fn four_u_closed_form(n: usize, r: usize) -> Rational {
    let (n, r) = (n as i64, r as i64);
    &Rational::new(16 * r, n - 2) - &Rational::new(2 * (n - 4), n - 1)
}

pub fn curvature_invariants(n: usize) -> Result<ProductSphereGeom, SphereError> {
    check_n(n)?;
    let (p, q) = (n / 2 - 1, n / 2 + 1);
    let ricci_p = int(p as i64 - 1);
    let ricci_q = int(q as i64 - 1);
    let sc = &(&ricci_p * &int(p as i64)) + &(&ricci_q * &int(q as i64));
    let j = &sc / &int(2 * (n as i64 - 1));
    debug_assert_eq!(j, j_closed_form(n));
    let schouten = |ric: &Rational| &(ric - &j) / &int(n as i64 - 2);
    Ok(ProductSphereGeom {
        n,
        p,
        q,
        lambda_p: schouten(&ricci_p),
        lambda_q: schouten(&ricci_q),
        ricci_p,
        ricci_q,
        sc,
        j,
    })
}

impl ProductSphereGeom {
    pub fn form_types(&self) -> Vec<FormType> {
        (0..=self.p).map(|r| FormType { r, s: self.p - r }).collect()
    }

    /// Eigenvalue of `U = J − 2P♯` on `(r, s)`-forms.
    pub fn u_on(&self, t: FormType) -> Rational {
        let sharp = &(&self.lambda_p * &int(t.r as i64)) + &(&self.lambda_q * &int(t.s as i64));
        &self.j - &(&sharp * &int(2))
    }
}

/// `4U` on `(r, s)`-forms, `r + s = n/2 − 1`, from the curvature data.
pub fn u_eigenvalue(n: usize, r: usize, s: usize) -> Result<Rational, SphereError> {
    let geom = curvature_invariants(n)?;
    if r + s != geom.p {
        return Err(SphereError::BadFormType { n, r, s });
    }
    let engine = &geom.u_on(FormType { r, s }) * &int(4);
    let closed = four_u_closed_form(n, r);
    if engine != closed {
        return Err(SphereError::MismatchWithClosedForm { n, r, s, engine, closed });
    }
    Ok(engine)
}

/// Eigenvalue of `Q = ½dδ + U` on the parallel `S^p` volume form.
pub fn q_omega_eigenvalue(n: usize) -> Result<Rational, SphereError> {
    let geom = curvature_invariants(n)?;
    let u = geom.u_on(FormType { r: geom.p, s: 0 });
    let expected = Rational::new(3 * n as i64, 2 * (n as i64 - 1));
    if u != expected {
        return Err(SphereError::MismatchWithClosedForm {
            n,
            r: geom.p,
            s: 0,
            engine: &u * &int(4),
            closed: &expected * &int(4),
        });
    }
    Ok(u)
}

/// The positivity argument showing that the joint null space of `δd`
/// and `δQ` on `p`-forms consists of harmonics.
#[derive(Clone, Debug, Serialize)]
pub struct HpAudit {
    pub n: usize,
    pub records: Vec<SpectralRecord>,
    pub min_four_u: Rational,
    pub min_above_minus_two: bool,
    /// `Some(4U ≥ 0)` at `n = 4`, `None` otherwise.
    pub nonnegative_branch: Option<bool>,
    /// Smallest possible nonzero eigenvalue of `Δ` on the product, using
    /// only the bound "nonzero eigenvalues on `S^m` are integers `≥ m`".
    pub smallest_nonzero_laplacian: usize,
    /// Nonzero `Δ`-eigenvalues below 2 that survive the bound.
    pub admissible_below_two: Vec<usize>,
    pub gap_branch: Option<bool>,
    pub chain: Vec<CheckRecord>,
}

impl HpAudit {
    pub fn holds(&self) -> bool {
        self.chain.iter().all(CheckRecord::is_ok)
    }
}

/// Values `a + b` with `a ∈ {0} ∪ [p, ∞)`, `b ∈ {0} ∪ [q, ∞)`, both integers,
/// that are nonzero and below `bound`.
fn small_sums(p: usize, q: usize, bound: usize) -> Vec<usize> {
    let side = |m: usize| -> Vec<usize> { std::iter::once(0).chain(m.max(1)..bound).collect() };
    let mut v: Vec<usize> = side(p)
        .iter()
        .flat_map(|a| side(q).into_iter().map(move |b| a + b))
        .filter(|&x| x > 0 && x < bound)
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

pub fn hp_audit(n: usize) -> Result<HpAudit, SphereError> {
    let geom = curvature_invariants(n)?;
    let mut records = Vec::new();
    for t in geom.form_types() {
        let engine = &geom.u_on(t) * &int(4);
        let closed = four_u_closed_form(n, t.r);
        records.push(SpectralRecord {
            n,
            form: t,
            matches: engine == closed,
            four_u_engine: engine,
            four_u_closed: closed,
            laplacian_spectrum: format!("a + b, a in {{0}} or integer >= {}, b in {{0}} or integer >= {}", geom.p, geom.q),
        });
    }
    let min_four_u = records.iter().map(|r| r.four_u_engine.clone()).min().expect("p ≥ 1");
    let min_above_minus_two = min_four_u > int(-2);
    let nonnegative_branch = (n == 4).then(|| min_four_u >= Rational::zero());
    let admissible_below_two = small_sums(geom.p, geom.q, 2);
    let smallest_nonzero_laplacian = geom.p.min(geom.q).max(1);
    let gap_branch = (n >= 6).then_some(admissible_below_two.is_empty());

    let mut chain = Vec::new();
    let all_match = records.iter().all(|r| r.matches);
    chain.push(
        CheckRecord::pass_if(format!("sphere/n={n}/u-spectrum"), "4U on (r,s)-forms is 16r/(n−2) − 2(n−4)/(n−1)", all_match)
            .param("n", n)
            .constant("J", geom.j.clone()),
    );
    chain.push(
        CheckRecord::pass_if(format!("sphere/n={n}/min-above-minus-two"), "the eigenvalues of 4U are > −2", min_above_minus_two)
            .param("n", n)
            .constant("min_4U", min_four_u.clone()),
    );
    if let Some(ok) = nonnegative_branch {
        chain.push(
            CheckRecord::pass_if(format!("sphere/n={n}/nonnegative-branch"), "for n = 4, U is a nonnegative operator", ok)
                .param("n", n),
        );
    }
    if let Some(ok) = gap_branch {
        chain.push(
            CheckRecord::pass_if(
                format!("sphere/n={n}/gap-branch"),
                "no nonzero Laplacian eigenvalue below 2 once n/2 − 1 ≥ 2",
                ok,
            )
            .param("n", n)
            .param("assumption", "nonzero form-Laplacian eigenvalues on S^m are integers >= m")
            .constant("smallest_nonzero", int(smallest_nonzero_laplacian as i64)),
        );
    }
    let conclusion = all_match && min_above_minus_two && nonnegative_branch.unwrap_or(true) && gap_branch.unwrap_or(true);
    chain.push(
        CheckRecord::pass_if(format!("sphere/n={n}/harmonics-only"), "the joint null space of δd and δQ is the harmonics", conclusion)
            .param("n", n),
    );
    let q_omega = q_omega_eigenvalue(n);
    let mut r = CheckRecord::pass_if(format!("sphere/n={n}/q-omega"), "Qω = 3nω/2(n−1)", q_omega.is_ok()).param("n", n);
    if let Ok(v) = q_omega {
        r = r.constant("eigenvalue", v);
    }
    chain.push(r);

    Ok(HpAudit {
        n,
        records,
        min_four_u,
        min_above_minus_two,
        nonnegative_branch,
        smallest_nonzero_laplacian,
        admissible_below_two,
        gap_branch,
        chain,
    })
}

/// Audit records for each dimension in `ns`.
pub fn sphere_audit_suite(ns: &[usize]) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for &n in ns {
        match hp_audit(n) {
            Ok(a) => out.extend(a.chain),
            Err(e) => out.push(CheckRecord::new(format!("sphere/n={n}"), "S^p × S^q spectral audit", Status::Fail).witness(e.to_string())),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_at_four_and_six() {
        let g = curvature_invariants(4).unwrap();
        assert_eq!((g.sc.clone(), g.j.clone()), (int(6), int(1)));
        let g = curvature_invariants(6).unwrap();
        assert_eq!((g.sc.clone(), g.j.clone()), (int(14), Rational::new(7, 5)));
    }

    #[test]
    fn small_sums_respect_gap() {
        assert_eq!(small_sums(1, 3, 2), vec![1]);
        assert!(small_sums(2, 4, 2).is_empty());
    }

    #[test]
    fn rejects_odd_dimension() {
        assert_eq!(curvature_invariants(5), Err(SphereError::BadDimension(5)));
        assert!(matches!(u_eigenvalue(4, 1, 1), Err(SphereError::BadFormType { .. })));
    }
}
