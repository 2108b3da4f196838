//! Exact linear algebra over the rationals: matrices, subspaces and the
//! subspace calculus every other module builds on.

mod mat;
pub mod rat;
mod subspace;

use thiserror::Error;

pub use mat::{nilpotent_exp, Mat};
pub use rat::{format_rat, int, parse_rat, rat, Rat};
pub use subspace::{
    canonicalize, kernel_basis, orthogonal_complement, orthogonal_projector, subspace_intersect,
    subspace_sum, Subspace,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("matrix is singular")]
    Singular,
    #[error("bad shape: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
}
