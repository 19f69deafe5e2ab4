use super::extract::{extract, Certify, ExtractError};
use super::slice_op::SliceOperator;
use crate::ambient::{ops, AmbientForm, OpAtom, OpExpr};
use crate::arith::{Rational, RationalFunction, Signature};
use crate::cone::{
    from_flat_trivialization, lift, lift_scaled, make_y, restrict, restrict_scaled, to_flat_trivialization, Scale,
    ScaleError, SliceForm,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const CONVENTION_VERSION: &str = "detour-conventions-1";

#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Scale(#[from] ScaleError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("operator is not tangential at the requested weight: {0}")]
    NotTangential(String),
}

/// Family of a built operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    L,
    G,
    Q,
    M,
    OrderN,
    StarL,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::L => "L",
            Family::G => "G",
            Family::Q => "Q",
            Family::M => "M",
            Family::OrderN => "order-n",
            Family::StarL => "star-L",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub family: Family,
    pub p: usize,
    pub q: usize,
    pub k: usize,
    pub ell: i64,
    pub scale: String,
    pub convention: String,
}

impl OperatorSpec {
    pub fn new(family: Family, sig: &Signature, k: usize, ell: i64, scale: &str) -> Self {
        OperatorSpec {
            family,
            p: sig.p,
            q: sig.q,
            k,
            ell,
            scale: scale.to_string(),
            convention: CONVENTION_VERSION.to_string(),
        }
    }

    pub fn sig(&self) -> Signature {
        Signature::new(self.p, self.q)
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// Stable text key, also hashed for cache file names.
    pub fn key(&self) -> String {
        format!(
            "{}:n={}:p={}:q={}:k={}:l={}:scale={}:{}",
            self.family.as_str(),
            self.n(),
            self.p,
            self.q,
            self.k,
            self.ell,
            self.scale,
            self.convention
        )
    }

    pub fn validate(&self) -> Result<(), BuildError> {
        let n = self.n();
        if n < 3 {
            return Err(BuildError::Precondition(format!("n = {n} < 3")));
        }
        if n % 2 == 1 {
            return Err(BuildError::Precondition("odd n is not supported".into()));
        }
        if self.k > n {
            return Err(BuildError::Precondition(format!("k = {} > n", self.k)));
        }
        if self.ell < -1 {
            return Err(BuildError::Precondition(format!("ℓ = {} < −1", self.ell)));
        }
        Ok(())
    }
}

/// `𝕂^ℓ = Δ̃^ℓ ι(Ð)ε(X)`, `ι(X)ε(X)` at `ℓ = −1`, zero below.
pub fn build_k(ell: i64) -> OpExpr {
    match ell {
        e if e >= 0 => {
            let mut atoms = vec![OpAtom::BochnerLap; e as usize];
            atoms.push(OpAtom::IotaDir);
            atoms.push(OpAtom::EpsX);
            OpExpr::word(atoms)
        }
        -1 => OpExpr::word(vec![OpAtom::IotaX, OpAtom::EpsX]),
        _ => OpExpr::zero(),
    }
}

/// Direct evaluation of [`build_k`].
pub fn apply_k(f: &AmbientForm, ell: i64) -> AmbientForm {
    match ell {
        e if e >= 0 => ops::lap_pow(&ops::iota_dirac(&ops::eps_x(f)), e as usize),
        -1 => ops::iota_x(&ops::eps_x(f)),
        _ => AmbientForm::zero(&f.sig, f.degree),
    }
}

/// Dual weight: `ℰ^k[w]` pairs with `ℰ^k[2k − n − w]`.
pub fn dual_weight(n: usize, k: usize, w: i64) -> i64 {
    2 * k as i64 - n as i64 - w
}

fn half(sig: &Signature) -> i64 {
    sig.n() as i64 / 2
}

fn certify_for(sig: &Signature, order: u32) -> Certify {
    if sig.n() >= 6 && order >= 4 {
        Certify::Sample(12)
    } else {
        Certify::All
    }
}

/// `L^ℓ_k u = q^k 𝕂^ℓ_k q_k u` on `ℰ^k[w]`, `w = k + ℓ − n/2`.
pub fn l_value(u: &SliceForm, ell: i64) -> SliceForm {
    let sig = &u.sig;
    let w = u.degree as i64 + ell - half(sig);
    restrict(&apply_k(&lift(u, w), ell)).with_weight(dual_weight(sig.n(), u.degree, w))
}

/// `L^ℓ_k` computed through the `σ`-trivialization, reported in the flat one.
pub fn l_value_scaled(u: &SliceForm, ell: i64, scale: &Scale) -> SliceForm {
    let sig = &u.sig;
    let w = u.degree as i64 + ell - half(sig);
    let u_sigma = from_flat_trivialization(&u.clone().with_weight(w), scale);
    let out = restrict_scaled(&apply_k(&lift_scaled(&u_sigma, w, scale), ell), scale);
    to_flat_trivialization(&out.with_weight(dual_weight(sig.n(), u.degree, w)), scale)
}

pub fn build_l(sig: &Signature, k: usize, ell: i64) -> Result<SliceOperator, BuildError> {
    OperatorSpec::new(Family::L, sig, k, ell, crate::cone::FLAT).validate()?;
    let w = k as i64 + ell - half(sig);
    let dst = (k, dual_weight(sig.n(), k, w));
    if ell < 0 {
        return Ok(extract(sig, (k, w), dst, 0, Certify::All, |u| l_value(u, ell))?);
    }
    let order = 2 * ell as u32;
    Ok(extract(sig, (k, w), dst, order, certify_for(sig, order), |u| l_value(u, ell))?)
}

/// `L^ℓ_k` extracted through a non-flat trivialization.
pub fn build_l_scaled(sig: &Signature, k: usize, ell: i64, scale: &Scale) -> Result<SliceOperator, BuildError> {
    OperatorSpec::new(Family::L, sig, k, ell, &scale.id).validate()?;
    scale.validate(sig)?;
    let w = k as i64 + ell - half(sig);
    let dst = (k, dual_weight(sig.n(), k, w));
    let order = 2 * ell.max(0) as u32;
    Ok(extract(sig, (k, w), dst, order, certify_for(sig, order), |u| l_value_scaled(u, ell, scale))?)
}

/// `L_k = L^{n/2−k}_k`.
pub fn build_l_critical(sig: &Signature, k: usize) -> Result<SliceOperator, BuildError> {
    build_l(sig, k, half(sig) - k as i64)
}

/// Ambient `ε(Y_σ)`-sandwich `q ι(Y)𝕂^{ℓ}ε(Y) q` on `ℰ^k[0]`.
fn sandwich(u: &SliceForm, ell: i64, y: &AmbientForm) -> SliceForm {
    let big = lift(u, 0);
    let inner = apply_k(&ops::eps_form(y, &big), ell);
    restrict(&ops::iota_form(y, &inner))
}

/// `Q^σ_k u = −2(ℓ+1) q^k ι(Y)𝕂^{ℓ−1}_{k+1} ε(Y) q_k u`, `ℓ = n/2 − k`, flat trivialization.
pub fn q_value(u: &SliceForm, y: &AmbientForm) -> SliceForm {
    let sig = &u.sig;
    let ell = half(sig) - u.degree as i64;
    sandwich(u, ell - 1, y)
        .scale(&Rational::from_int(-2 * (ell + 1)))
        .with_weight(dual_weight(sig.n(), u.degree, 0))
}

pub fn build_q(sig: &Signature, k: usize, scale: &Scale) -> Result<SliceOperator, BuildError> {
    let ell = half(sig) - k as i64;
    OperatorSpec::new(Family::Q, sig, k, ell, &scale.id).validate()?;
    if ell < 0 {
        return Err(BuildError::Precondition(format!("k = {k} > n/2")));
    }
    let y = make_y(sig, scale)?.y;
    let order = 2 * ell as u32;
    let dst = (k, dual_weight(sig.n(), k, 0));
    Ok(extract(sig, (k, 0), dst, order, certify_for(sig, order), |u| q_value(u, &y))?)
}

/// `M_k = −4ℓ(ℓ+1) q^{k+1} ι(Y)𝕂^{ℓ−2}_{k+2} ε(Y) q_{k+1}` on `ℰ^{k+1}[0]`.
pub fn m_value(v: &SliceForm, k: usize, y: &AmbientForm) -> SliceForm {
    let sig = &v.sig;
    let ell = half(sig) - k as i64;
    sandwich(v, ell - 2, y)
        .scale(&Rational::from_int(-4 * ell * (ell + 1)))
        .with_weight(dual_weight(sig.n(), k + 1, 0))
}

pub fn build_m(sig: &Signature, k: usize, scale: &Scale) -> Result<SliceOperator, BuildError> {
    let ell = half(sig) - k as i64;
    OperatorSpec::new(Family::M, sig, k, ell, &scale.id).validate()?;
    if ell < 1 {
        return Err(BuildError::Precondition(format!("M_k needs k < n/2, got k = {k}")));
    }
    let y = make_y(sig, scale)?.y;
    let order = 2 * (ell - 1) as u32;
    let dst = (k + 1, dual_weight(sig.n(), k + 1, 0));
    Ok(extract(sig, (k + 1, 0), dst, order, certify_for(sig, order), |v| m_value(v, k, &y))?)
}

/// `G^σ_k u = q^{k−1} ι(Y)𝕂^ℓ_k q_k u`, `ℓ = n/2 − k`.
pub fn g_value(u: &SliceForm, y: &AmbientForm) -> SliceForm {
    let sig = &u.sig;
    let ell = half(sig) - u.degree as i64;
    if u.degree == 0 {
        return SliceForm::zero(sig, 0, dual_weight(sig.n(), 0, 0));
    }
    let inner = apply_k(&lift(u, 0), ell);
    restrict(&ops::iota_form(y, &inner)).with_weight(dual_weight(sig.n(), u.degree - 1, 0))
}

pub fn build_g(sig: &Signature, k: usize, scale: &Scale) -> Result<SliceOperator, BuildError> {
    let ell = half(sig) - k as i64;
    OperatorSpec::new(Family::G, sig, k, ell, &scale.id).validate()?;
    if ell < 0 {
        return Err(BuildError::Precondition(format!("k = {k} > n/2")));
    }
    if k == 0 {
        return Ok(SliceOperator::zero(sig, (0, 0), (0, dual_weight(sig.n(), 0, 0))));
    }
    let y = make_y(sig, scale)?.y;
    let order = 2 * ell as u32 + 1;
    let dst = (k - 1, dual_weight(sig.n(), k - 1, 0));
    Ok(extract(sig, (k, 0), dst, order, certify_for(sig, order), |u| g_value(u, &y))?)
}

/// `L̃^{n/2}_k = q^k δ̃ι(X)ε(Ð) □_{ℓ−1} ι(Ð)ε(X)d̃ q_k` on `ℰ^k[k]`.
pub fn order_n_value(u: &SliceForm) -> SliceForm {
    let sig = &u.sig;
    let ell = half(sig) as usize;
    let k = u.degree;
    let w = k as i64;
    let mut f = ops::ext_d(&lift(u, w));
    f = ops::iota_dirac(&ops::eps_x(&f));
    f = ops::tractor_box(&f, ell - 1);
    f = ops::codiff(&ops::iota_x(&ops::eps_dirac(&f)));
    restrict(&f).with_weight(dual_weight(sig.n(), k, w))
}

pub fn build_order_n(sig: &Signature, k: usize) -> Result<SliceOperator, BuildError> {
    let n = sig.n();
    OperatorSpec::new(Family::OrderN, sig, k, half(sig), crate::cone::FLAT).validate()?;
    if k == 0 || k >= n || n < 4 {
        return Err(BuildError::Precondition(format!("order-n operator needs 0 < k < n and n ≥ 4, got k = {k}")));
    }
    let w = k as i64;
    let order = n as u32;
    Ok(extract(sig, (k, w), (k, dual_weight(n, k, w)), order, certify_for(sig, order), order_n_value)?)
}

/// `★L^ℓ_k★` on `ℰ^{n−k}`.
pub fn build_star_conjugate(sig: &Signature, k: usize, ell: i64) -> Result<SliceOperator, BuildError> {
    if !sig.is_riemannian() {
        return Err(BuildError::Precondition("Hodge conjugates need Riemannian signature".into()));
    }
    let l = build_l(sig, k, ell)?;
    let n = sig.n();
    let star_in = SliceOperator::star(sig, n - k, l.src.1);
    let star_out = SliceOperator::star(sig, k, l.dst.1);
    Ok(star_out.compose(&l).compose(&star_in))
}

/// `𝕊^σ q_k u = q^{k′} δ̃ι(X)ε(Ð) S ι(Ð)ε(X)ε(Y_σ) q_k u`.
pub fn s_modified_value(u: &SliceForm, w: i64, s: &OpExpr, y: &AmbientForm) -> Result<SliceForm, BuildError> {
    let mut f = ops::iota_dirac(&ops::eps_x(&ops::eps_form(y, &lift(u, w))));
    f = s.apply(&f).map_err(|e| BuildError::Precondition(e.to_string()))?;
    f = ops::codiff(&ops::iota_x(&ops::eps_dirac(&f)));
    Ok(restrict(&f))
}

/// The log-density form `n Δ_B^{n/2} log σ`, restricted and `σ`-trivialized.
pub fn build_fh_q(sig: &Signature, scale: &Scale) -> Result<SliceForm, BuildError> {
    scale.validate(sig)?;
    let n = sig.n();
    if n % 2 == 1 {
        return Err(BuildError::Precondition("odd n is not supported".into()));
    }
    let sigma = scale.sigma_fn();
    let ds = ops::ext_d(&AmbientForm::scalar(sig, sigma.clone()));
    let norm = crate::cone::pair_one_forms(&ds, &ds);
    let first = norm.div(&sigma.mul(&sigma));
    let mut f = AmbientForm::scalar(sig, first).with_weight(Some(-2));
    f = ops::lap_pow(&f, n / 2 - 1);
    let flat = restrict(&f.scale(&Rational::from_int(n as i64))).with_weight(-(n as i64));
    Ok(from_flat_trivialization(&flat, scale))
}

/// `Q^σ_0 1` in the `σ`-trivialization.
pub fn q_curvature(sig: &Signature, scale: &Scale) -> Result<SliceForm, BuildError> {
    let y = make_y(sig, scale)?.y;
    let one = SliceForm::basis(sig, &[], RationalFunction::one(), 0);
    Ok(from_flat_trivialization(&q_value(&one, &y), scale))
}

/// Builds the operator named by `spec`.
pub fn build(spec: &OperatorSpec) -> Result<SliceOperator, BuildError> {
    spec.validate()?;
    let sig = spec.sig();
    let scale = Scale::by_id(&sig, &spec.scale)?;
    let flat = scale.id == crate::cone::FLAT;
    match spec.family {
        Family::L if flat => build_l(&sig, spec.k, spec.ell),
        Family::L => build_l_scaled(&sig, spec.k, spec.ell, &scale),
        Family::G => build_g(&sig, spec.k, &scale),
        Family::Q => build_q(&sig, spec.k, &scale),
        Family::M => build_m(&sig, spec.k, &scale),
        Family::OrderN => build_order_n(&sig, spec.k),
        Family::StarL => build_star_conjugate(&sig, spec.k, spec.ell),
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Family::L, Family::G, Family::Q, Family::M, Family::OrderN, Family::StarL]
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown operator family {s}"))
    }
}
