use crate::ambient::{ops, AmbientForm};
use crate::arith::{MultiPoly, Rational, RationalFunction, Signature};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScaleError {
    #[error("scale {0} is not homogeneous of degree 1")]
    NotDegreeOne(String),
    #[error("d̃σ vanishes on the cone chart for scale {0}")]
    DegenerateScale(String),
    #[error("scale {0} vanishes identically on the slice")]
    VanishesOnSlice(String),
    #[error("cannot parse scale entry: {0}")]
    Parse(String),
    #[error("unknown scale id {0}")]
    Unknown(String),
}

/// A homogeneity-1 function on the ambient space.
#[derive(Clone, Debug, PartialEq)]
pub struct Scale {
    pub id: String,
    pub sigma: MultiPoly,
}

pub const FLAT: &str = "flat";
pub const ROUND: &str = "round";

/// `c` in `σ = t + cρ` for the round scale; gives the unit sphere metric.
pub fn round_constant() -> Rational {
    Rational::new(-1, 2)
}

impl Scale {
    pub fn new(sig: &Signature, id: &str, sigma: MultiPoly) -> Result<Self, ScaleError> {
        let s = Scale { id: id.to_string(), sigma };
        s.validate(sig)?;
        Ok(s)
    }

    pub fn flat(sig: &Signature) -> Self {
        Scale { id: FLAT.into(), sigma: MultiPoly::var(sig.t()) }
    }

    /// `σ = t + cρ` with `c = −1/2`.
    pub fn round(sig: &Signature) -> Self {
        let sigma = MultiPoly::var(sig.t()).add(&MultiPoly::var(sig.rho()).scale(&round_constant()));
        Scale { id: ROUND.into(), sigma }
    }

    pub fn by_id(sig: &Signature, id: &str) -> Result<Self, ScaleError> {
        match id {
            FLAT => Ok(Self::flat(sig)),
            ROUND => Ok(Self::round(sig)),
            _ => Err(ScaleError::Unknown(id.to_string())),
        }
    }

    pub fn validate(&self, sig: &Signature) -> Result<(), ScaleError> {
        if self.sigma.homogeneous_degree() != Some(1) {
            return Err(ScaleError::NotDegreeOne(self.id.clone()));
        }
        let f = AmbientForm::scalar(sig, self.sigma_fn());
        if ops::ext_d(&f).reduce_mod_cone().is_zero() {
            return Err(ScaleError::DegenerateScale(self.id.clone()));
        }
        if self.slice_factor(sig).is_zero() {
            return Err(ScaleError::VanishesOnSlice(self.id.clone()));
        }
        Ok(())
    }

    pub fn sigma_fn(&self) -> RationalFunction {
        RationalFunction::from_poly(self.sigma.clone())
    }

    /// `s(x) = σ(1, x, −|x|²/2)`, so the σ-section is `x ↦ φ(x)/s(x)`.
    pub fn slice_factor(&self, sig: &Signature) -> RationalFunction {
        RationalFunction::from_poly(self.sigma.substitute(&slice_images(sig)))
    }

    pub fn is_flat(&self, sig: &Signature) -> bool {
        self.sigma == MultiPoly::var(sig.t())
    }

    /// Parses `id = polynomial` with variables `t, x1..xn, r`.
    pub fn parse_entry(sig: &Signature, line: &str) -> Result<Self, ScaleError> {
        let (id, poly) = line.split_once('=').ok_or_else(|| ScaleError::Parse(line.to_string()))?;
        let sigma = MultiPoly::parse(poly, &sig.ambient_names()).ok_or_else(|| ScaleError::Parse(line.to_string()))?;
        Scale::new(sig, id.trim(), sigma)
    }

    pub fn render(&self, sig: &Signature) -> String {
        format!("{} = {}", self.id, self.sigma.render(&sig.ambient_names()))
    }
}

/// Polynomial images of the ambient variables under `x ↦ (1, x, −|x|²/2)`.
pub fn slice_images(sig: &Signature) -> Vec<MultiPoly> {
    let n = sig.n();
    let mut v = vec![MultiPoly::one()];
    v.extend((0..n).map(MultiPoly::var));
    v.push(sig.slice_norm_sq().scale(&Rational::new(-1, 2)));
    v
}

/// Loads a registry: one `id = polynomial` per non-empty, non-`#` line.
pub fn load_registry(sig: &Signature, text: &str) -> Result<Vec<Scale>, ScaleError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| Scale::parse_entry(sig, l))
        .collect()
}

/// The registry shipped with the engine.
pub fn default_registry(sig: &Signature) -> Vec<Scale> {
    vec![Scale::flat(sig), Scale::round(sig)]
}

/// The tractor `Y_σ = I − ½(I•I)X♭` with `I = σ⁻¹ε(Ð)σ / n`.
#[derive(Clone, Debug)]
pub struct YTractor {
    pub scale: Scale,
    pub i_form: AmbientForm,
    pub i_norm: RationalFunction,
    pub y: AmbientForm,
}

/// Metric pairing of two ambient 1-forms.
pub fn pair_one_forms(a: &AmbientForm, b: &AmbientForm) -> RationalFunction {
    let sig = &a.sig;
    let mut acc = RationalFunction::zero();
    for (i, j, s) in sig.inverse_metric() {
        let t = a.get(1 << i).mul(&b.get(1 << j));
        acc = if s > 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    acc
}

pub fn make_y(sig: &Signature, scale: &Scale) -> Result<YTractor, ScaleError> {
    scale.validate(sig)?;
    let sigma = AmbientForm::scalar(sig, scale.sigma_fn());
    let n = Rational::from_int(sig.n() as i64);
    let inv = scale.sigma_fn().scale(&n);
    let i_form = ops::eps_dirac(&sigma).map(|c| c.div(&inv)).with_weight(Some(-1));
    let i_norm = pair_one_forms(&i_form, &i_form);
    let x = AmbientForm::from_acc(
        sig,
        1,
        ops::x_flat(sig).into_iter().enumerate().map(|(a, c)| (1u32 << a, c)).collect(),
        Some(1),
    );
    let y = i_form
        .sub(&x.mul_fn(&i_norm.scale(&Rational::new(1, 2))))
        .with_weight(Some(-1));
    Ok(YTractor { scale: scale.clone(), i_form, i_norm, y })
}

impl YTractor {
    /// `X•Y`.
    pub fn x_dot_y(&self) -> RationalFunction {
        let sig = &self.y.sig;
        let xv = ops::x_vector(sig);
        (0..sig.dim()).fold(RationalFunction::zero(), |acc, a| acc.add(&xv[a].mul(&self.y.get(1 << a))))
    }

    /// `Y•Y`.
    pub fn y_dot_y(&self) -> RationalFunction {
        pair_one_forms(&self.y, &self.y)
    }
}
