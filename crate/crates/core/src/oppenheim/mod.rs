//! Small values of irrational indefinite quadratic forms at primitive
//! integer vectors, with exact arithmetic in a real quadratic field.

mod field;
mod form;
mod search;

use thiserror::Error;

pub use field::QuadRat;
pub use form::QuadraticForm;
pub use search::{
    decay_curve, search_min_value, DecayCurve, Kappa, SearchResult, MAX_OUTER, MAX_T,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OppenheimError {
    #[error("cannot parse form: {0}")]
    Parse(String),
    #[error("forms need at least 3 variables, got {0}")]
    Dimension(usize),
    #[error("form is definite or degenerate (signature {pos}+, {neg}-)")]
    Signature { pos: usize, neg: usize },
    #[error("search budget exceeded: {0}")]
    Budget(String),
    #[error("values overflow 128-bit arithmetic")]
    Overflow,
    #[error("cannot fit decay: {0}")]
    Fit(String),
}
