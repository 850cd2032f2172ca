//! Exact arithmetic in cyclotomic fields, interval enclosures and matrices.

mod cyclotomic;
mod interval;
mod matrix;
pub mod rational;

pub use cyclotomic::{
    cyc_arith, cyc_conj_and_realness, cyc_to_float, cyclotomic_polynomial, field_order,
    parse_rational, CycNumber, CycOp,
};
pub use interval::{ComplexInterval, Interval};
pub use matrix::{exact_rank, ComplexMatrix, CycMatrix, Entry, Matrix};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("cyclotomic orders differ: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("value is not real")]
    NotReal,
    #[error("cannot parse cyclotomic number {0:?}")]
    Parse(String),
}
