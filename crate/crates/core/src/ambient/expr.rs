use super::form::AmbientForm;
use super::ops;
use crate::arith::{Rational, RationalFunction};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AmbientError {
    #[error("form degree {0} out of range for ambient dimension {1}")]
    DegreeOutOfRange(usize, usize),
    #[error("atom {0} needs a declared weight")]
    WeightUndeclared(String),
}

/// Primitive ambient operator.
#[derive(Clone, Debug)]
pub enum OpAtom {
    ExtD,
    Codiff,
    EpsX,
    IotaX,
    MulQ,
    FormLap,
    BochnerLap,
    LieX,
    LieXStar,
    /// `∇_X`.
    Euler,
    /// Multiplication by the form degree.
    Degree,
    EpsDir,
    IotaDir,
    /// `□_m` built from contracted tractor-D slots.
    TractorBox(usize),
    /// Multiplication by a homogeneous function of the given degree.
    ScalarMul(RationalFunction, i64),
    EpsForm(AmbientForm),
    IotaForm(AmbientForm),
}

impl OpAtom {
    /// `(degree shift, weight shift)`.
    pub fn shifts(&self) -> (i64, i64) {
        match self {
            OpAtom::ExtD => (1, -1),
            OpAtom::Codiff => (-1, -1),
            OpAtom::EpsX => (1, 1),
            OpAtom::IotaX => (-1, 1),
            OpAtom::MulQ => (0, 2),
            OpAtom::FormLap | OpAtom::BochnerLap => (0, -2),
            OpAtom::LieX | OpAtom::LieXStar | OpAtom::Euler | OpAtom::Degree => (0, 0),
            OpAtom::EpsDir => (1, -1),
            OpAtom::IotaDir => (-1, -1),
            OpAtom::TractorBox(m) => (0, -2 * *m as i64),
            OpAtom::ScalarMul(_, w) => (0, *w),
            OpAtom::EpsForm(f) => (1, f.weight.unwrap_or(0) + 1),
            OpAtom::IotaForm(f) => (-1, f.weight.unwrap_or(0) + 1),
        }
    }

    pub fn apply(&self, f: &AmbientForm) -> AmbientForm {
        match self {
            OpAtom::ExtD => ops::ext_d(f),
            OpAtom::Codiff => ops::codiff(f),
            OpAtom::EpsX => ops::eps_x(f),
            OpAtom::IotaX => ops::iota_x(f),
            OpAtom::MulQ => ops::mul_q(f),
            OpAtom::FormLap => ops::form_lap(f),
            OpAtom::BochnerLap => ops::bochner_lap(f),
            OpAtom::LieX => ops::lie_x(f),
            OpAtom::LieXStar => ops::lie_x_star(f),
            OpAtom::Euler => ops::nabla_x(f),
            OpAtom::Degree => f.scale(&Rational::from_int(f.degree as i64)),
            OpAtom::EpsDir => ops::eps_dirac(f),
            OpAtom::IotaDir => ops::iota_dirac(f),
            OpAtom::TractorBox(m) => ops::tractor_box(f, *m),
            OpAtom::ScalarMul(g, w) => {
                let mut out = f.map(|c| c.mul(g));
                out.weight = f.weight.map(|x| x + w);
                out
            }
            OpAtom::EpsForm(w) => ops::eps_form(w, f),
            OpAtom::IotaForm(w) => ops::iota_form(w, f),
        }
    }

    fn name(&self) -> String {
        match self {
            OpAtom::ExtD => "d".into(),
            OpAtom::Codiff => "δ".into(),
            OpAtom::EpsX => "ε(X)".into(),
            OpAtom::IotaX => "ι(X)".into(),
            OpAtom::MulQ => "Q".into(),
            OpAtom::FormLap => "Δ".into(),
            OpAtom::BochnerLap => "Δ_B".into(),
            OpAtom::LieX => "ℒ".into(),
            OpAtom::LieXStar => "ℒ*".into(),
            OpAtom::Euler => "∇X".into(),
            OpAtom::Degree => "p".into(),
            OpAtom::EpsDir => "ε(Ð)".into(),
            OpAtom::IotaDir => "ι(Ð)".into(),
            OpAtom::TractorBox(m) => format!("□{m}"),
            OpAtom::ScalarMul(_, _) => "f".into(),
            OpAtom::EpsForm(_) => "ε(ω)".into(),
            OpAtom::IotaForm(_) => "ι(ω)".into(),
        }
    }
}

/// A rational linear combination of compositions of atoms.
///
/// Each word is written left to right; the rightmost atom applies first.
#[derive(Clone, Debug, Default)]
pub struct OpExpr {
    pub terms: Vec<(Rational, Vec<OpAtom>)>,
}

impl OpExpr {
    pub fn zero() -> Self {
        OpExpr { terms: Vec::new() }
    }

    pub fn identity() -> Self {
        OpExpr { terms: vec![(Rational::one(), Vec::new())] }
    }

    pub fn atom(a: OpAtom) -> Self {
        OpExpr { terms: vec![(Rational::one(), vec![a])] }
    }

    /// Composition of atoms, leftmost applied last.
    pub fn word(atoms: Vec<OpAtom>) -> Self {
        OpExpr { terms: vec![(Rational::one(), atoms)] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(c, _)| c.is_zero())
    }

    /// `self ∘ other`.
    pub fn then(&self, other: &OpExpr) -> OpExpr {
        let mut terms = Vec::new();
        for (a, u) in &self.terms {
            for (b, v) in &other.terms {
                let mut w = u.clone();
                w.extend(v.iter().cloned());
                terms.push((a * b, w));
            }
        }
        OpExpr { terms }
    }

    pub fn add(&self, other: &OpExpr) -> OpExpr {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        OpExpr { terms }
    }

    pub fn sub(&self, other: &OpExpr) -> OpExpr {
        self.add(&other.scale(&Rational::from_int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> OpExpr {
        OpExpr { terms: self.terms.iter().map(|(a, w)| (a * c, w.clone())).collect() }
    }

    pub fn pow(&self, m: usize) -> OpExpr {
        (0..m).fold(OpExpr::identity(), |acc, _| acc.then(self))
    }

    /// `(degree shift, weight shift)` of the first word; all words must agree.
    pub fn shifts(&self) -> Option<(i64, i64)> {
        let mut out = None;
        for (_, w) in &self.terms {
            let s = w.iter().fold((0, 0), |(d, x), a| {
                let (dd, ww) = a.shifts();
                (d + dd, x + ww)
            });
            match out {
                None => out = Some(s),
                Some(t) if t == s => {}
                _ => return None,
            }
        }
        out
    }

    pub fn apply(&self, f: &AmbientForm) -> Result<AmbientForm, AmbientError> {
        if f.degree > f.dim() {
            return Err(AmbientError::DegreeOutOfRange(f.degree, f.dim()));
        }
        let (dshift, wshift) = self.shifts().unwrap_or((0, 0));
        let out_degree = (f.degree as i64 + dshift).max(0) as usize;
        let mut acc = AmbientForm::zero(&f.sig, out_degree);
        for (c, word) in &self.terms {
            if c.is_zero() {
                continue;
            }
            let mut g = f.clone();
            for a in word.iter().rev() {
                if g.is_zero() {
                    break;
                }
                g = a.apply(&g);
            }
            if !g.is_zero() {
                acc = acc.add(&g.scale(c));
            }
        }
        acc.degree = out_degree;
        acc.weight = f.weight.map(|w| w + wshift);
        Ok(acc)
    }
}

impl From<OpAtom> for OpExpr {
    fn from(a: OpAtom) -> Self {
        OpExpr::atom(a)
    }
}

impl fmt::Display for OpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, w)| {
                let body = if w.is_empty() {
                    "1".to_string()
                } else {
                    w.iter().map(OpAtom::name).collect::<Vec<_>>().join("∘")
                };
                if c.is_one() {
                    body
                } else {
                    format!("({c})·{body}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
