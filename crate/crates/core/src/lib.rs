//! Exact symbolic engine for conformally invariant operators on differential
//! forms, realized on the flat ambient cone.

pub mod ambient;
pub mod arith;
pub mod cone;
pub mod harness;
pub mod operators;
pub mod report;
pub mod sphere;
pub mod symbols;

pub use ambient::{AmbientForm, OpAtom, OpExpr};
pub use arith::{Mono, MultiPoly, Rational, RationalFunction, Signature};
pub use report::{CheckRecord, Status};
