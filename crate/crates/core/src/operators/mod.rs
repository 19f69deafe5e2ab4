//! Slice differential operators descended from ambient formulae.

mod build;
mod extract;
mod slice_op;

pub use build::*;
pub use suites::{delta_d_power, dd_power, closed_trials};
pub use extract::{extract, Certify, ExtractError};
pub use slice_op::{diff_multi, ScalarOp, SliceOperator};
pub mod suites;
