//! Exact coefficient arithmetic: rationals, polynomials, rational functions,
//! and reduction modulo the cone ideal `(Q)`.

mod poly;
mod ratfunc;
mod rational;

pub use poly::{Mono, MultiPoly, MAX_VARS};
pub use ratfunc::RationalFunction;
pub use rational::Rational;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("inhomogeneous rational function")]
    Inhomogeneous,
    #[error("denominator vanishes identically on the cone chart")]
    ChartViolation,
    #[error("polynomial is not divisible by Q")]
    NotDivisible,
    #[error("zero has no homogeneity degree")]
    ZeroInput,
}

/// Signature `(p, q)` of the slice metric; the ambient space is `ℝ^{p+1,q+1}`.
///
/// Ambient variables are indexed `t = 0`, `xᵃ = a` for `a = 1..=n`, `ρ = n+1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Self {
        assert!(p + q + 2 <= MAX_VARS, "dimension too large");
        Signature { p, q }
    }

    pub fn riemannian(n: usize) -> Self {
        Self::new(n, 0)
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// Ambient dimension `n + 2`.
    pub fn dim(&self) -> usize {
        self.n() + 2
    }

    pub fn t(&self) -> usize {
        0
    }

    pub fn rho(&self) -> usize {
        self.n() + 1
    }

    /// `ε_a` for slice index `a` in `1..=n`.
    pub fn eps(&self, a: usize) -> i64 {
        if a <= self.p {
            1
        } else {
            -1
        }
    }

    pub fn is_riemannian(&self) -> bool {
        self.q == 0
    }

    /// `|x|²_ε = Σ ε_a (xᵃ)²` in ambient variables.
    pub fn x_norm_sq(&self) -> MultiPoly {
        let terms = (1..=self.n())
            .map(|a| {
                let mut m = Mono::one();
                m.0[a] = 2;
                (m, Rational::from_int(self.eps(a)))
            })
            .collect();
        MultiPoly::from_terms(terms)
    }

    /// The same quadratic form in slice variables `x¹..xⁿ` (indices `0..n`).
    pub fn slice_norm_sq(&self) -> MultiPoly {
        let terms = (1..=self.n())
            .map(|a| {
                let mut m = Mono::one();
                m.0[a - 1] = 2;
                (m, Rational::from_int(self.eps(a)))
            })
            .collect();
        MultiPoly::from_terms(terms)
    }

    /// `Q = 2tρ + Σ ε_a (xᵃ)²`.
    pub fn q_poly(&self) -> MultiPoly {
        let mut m = Mono::one();
        m.0[self.t()] = 1;
        m.0[self.rho()] = 1;
        MultiPoly::monomial(m, Rational::from_int(2)).add(&self.x_norm_sq())
    }

    /// Inverse metric `h^{AB}` as a list of nonzero entries.
    pub fn inverse_metric(&self) -> Vec<(usize, usize, i64)> {
        let mut out = vec![(self.t(), self.rho(), 1), (self.rho(), self.t(), 1)];
        for a in 1..=self.n() {
            out.push((a, a, self.eps(a)));
        }
        out.sort();
        out
    }

    /// The partner index and sign with `h^{AB} = sign` for the unique nonzero `B`.
    pub fn raise(&self, a: usize) -> (usize, i64) {
        if a == self.t() {
            (self.rho(), 1)
        } else if a == self.rho() {
            (self.t(), 1)
        } else {
            (a, self.eps(a))
        }
    }

    /// Variable names `t, x1..xn, r` for ambient rendering.
    pub fn ambient_names(&self) -> Vec<String> {
        let mut v = vec!["t".to_string()];
        v.extend((1..=self.n()).map(|a| format!("x{a}")));
        v.push("r".to_string());
        v.resize(MAX_VARS, "_".to_string());
        v
    }

    /// Variable names `x1..xn` for slice rendering.
    pub fn slice_names(&self) -> Vec<String> {
        let mut v: Vec<String> = (1..=self.n()).map(|a| format!("x{a}")).collect();
        v.resize(MAX_VARS, "_".to_string());
        v
    }

    /// Homogeneity degree of an ambient rational function.
    pub fn homogeneous_degree(&self, f: &RationalFunction) -> Result<i64, ArithError> {
        if f.is_zero() {
            return Err(ArithError::ZeroInput);
        }
        f.homogeneous_degree().ok_or(ArithError::Inhomogeneous)
    }

    /// Substitutes `ρ ↦ −|x|²_ε/(2t)`; the result is zero iff `f ∈ (Q)`.
    pub fn reduce_mod_cone(&self, f: &RationalFunction) -> Result<RationalFunction, ArithError> {
        let mut images: Vec<RationalFunction> =
            (0..self.dim()).map(RationalFunction::var).collect();
        images[self.rho()] = RationalFunction::over_mono(
            self.x_norm_sq().scale(&Rational::new(-1, 2)),
            Mono::var(self.t()),
        );
        for (g, _) in f.factors() {
            let img = RationalFunction::from_poly(g.clone()).substitute(&images);
            if img.is_zero() {
                return Err(ArithError::ChartViolation);
            }
        }
        Ok(f.substitute(&images).reduced())
    }

    /// Exact quotient `f / Q`.
    pub fn divide_exact_by_q(&self, f: &MultiPoly) -> Result<MultiPoly, ArithError> {
        f.div_exact(&self.q_poly()).ok_or(ArithError::NotDivisible)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_reduction_examples() {
        let s = Signature::riemannian(4);
        let q = RationalFunction::from_poly(s.q_poly());
        assert!(s.reduce_mod_cone(&q).unwrap().is_zero());
        let t = RationalFunction::var(0);
        let rho = RationalFunction::var(s.rho());
        let f = t.mul(&rho).add(&q);
        let expect = RationalFunction::from_poly(s.x_norm_sq().scale(&Rational::new(-1, 2)));
        assert_eq!(s.reduce_mod_cone(&f).unwrap(), expect);
    }

    #[test]
    fn divide_by_q_examples() {
        let s = Signature::new(3, 1);
        let q = s.q_poly();
        assert_eq!(s.divide_exact_by_q(&q.mul(&q)).unwrap(), q);
        assert_eq!(s.divide_exact_by_q(&q.mul(&MultiPoly::var(1))).unwrap(), MultiPoly::var(1));
        assert_eq!(s.divide_exact_by_q(&MultiPoly::var(1)), Err(ArithError::NotDivisible));
    }

    #[test]
    fn degrees() {
        let s = Signature::riemannian(4);
        let f = RationalFunction::over_mono(MultiPoly::var(1), Mono::var(0));
        assert_eq!(s.homogeneous_degree(&f), Ok(0));
        assert_eq!(s.homogeneous_degree(&RationalFunction::from_poly(s.q_poly())), Ok(2));
        let g = RationalFunction::var(0).add(&RationalFunction::one());
        assert_eq!(s.homogeneous_degree(&g), Err(ArithError::Inhomogeneous));
    }
}
