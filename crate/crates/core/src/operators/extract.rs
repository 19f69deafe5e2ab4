use super::slice_op::{ScalarOp, SliceOperator};
use crate::arith::{Mono, MultiPoly, Rational, RationalFunction, Signature};
use crate::cone::{masks_of_degree, SliceForm};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error("certification failed on {input}: residue {residue}")]
    Certification { input: String, residue: String },
}

/// How many degree `m + 1` monomials are probed per input component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certify {
    All,
    Sample(usize),
}

fn monomial_form(sig: &Signature, k: usize, w: i64, mask: u32, beta: &Mono) -> SliceForm {
    let f = RationalFunction::from_poly(MultiPoly::monomial(*beta, Rational::one()));
    let mut comps = BTreeMap::new();
    comps.insert(mask, f);
    SliceForm::from_comps(sig, k, comps, w)
}

/// `β!/(β−α)!·x^{β−α}`, i.e. `∂^α x^β`.
fn falling(alpha: &Mono, beta: &Mono) -> RationalFunction {
    let rest = beta.div(alpha).expect("α divides β");
    let c = beta.factorial() * rest.factorial().recip();
    RationalFunction::from_poly(MultiPoly::monomial(rest, c))
}

/// Recovers the slice operator of order `≤ order` realized by `pipeline`
/// by evaluating it on `x^β dx^J`, `|β| ≤ order`, then certifies it one
/// degree higher.
pub fn extract<F>(
    sig: &Signature,
    src: (usize, i64),
    dst: (usize, i64),
    order: u32,
    certify: Certify,
    pipeline: F,
) -> Result<SliceOperator, ExtractError>
where
    F: Fn(&SliceForm) -> SliceForm,
{
    let n = sig.n();
    let mut op = SliceOperator::zero(sig, src, dst);
    for mask in masks_of_degree(n, src.0) {
        let mut found: BTreeMap<u32, ScalarOp> = BTreeMap::new();
        for beta in Mono::all_up_to_degree(n, order) {
            let out = pipeline(&monomial_form(sig, src.0, src.1, mask, &beta));
            let inv = beta.factorial().recip();
            let mut rows: Vec<u32> = out.comps.keys().copied().collect();
            rows.extend(found.keys().copied());
            rows.sort_unstable();
            rows.dedup();
            for row in rows {
                let mut r = out.get(row);
                if let Some(s) = found.get(&row) {
                    for (alpha, c) in s {
                        if alpha != &beta && alpha.divides(&beta) {
                            r = r.sub(&c.mul(&falling(alpha, &beta)));
                        }
                    }
                }
                let r = r.reduced();
                if !r.is_zero() {
                    found.entry(row).or_default().insert(beta, r.scale(&inv));
                }
            }
        }
        for (row, s) in found {
            op.entries.insert((row, mask), s);
        }
    }
    let op = op.normalize();
    certify_extraction(&op, order + 1, certify, &pipeline)?;
    Ok(op)
}

fn certify_extraction<F>(op: &SliceOperator, degree: u32, certify: Certify, pipeline: &F) -> Result<(), ExtractError>
where
    F: Fn(&SliceForm) -> SliceForm,
{
    let n = op.sig.n();
    let all = Mono::all_of_degree(n, degree);
    let probes: Vec<Mono> = match certify {
        Certify::All => all,
        Certify::Sample(m) if m >= all.len() => all,
        Certify::Sample(m) => {
            let stride = all.len() / m;
            all.into_iter().step_by(stride.max(1)).take(m).collect()
        }
    };
    for mask in masks_of_degree(n, op.src.0) {
        for beta in &probes {
            let u = monomial_form(&op.sig, op.src.0, op.src.1, mask, beta);
            let lhs = pipeline(&u);
            let rhs = op.apply(&u);
            let diff = lhs.sub(&rhs).map(|c| c.clone().reduced());
            if !diff.is_zero() {
                return Err(ExtractError::Certification { input: u.render(), residue: diff.render() });
            }
        }
    }
    Ok(())
}
