//! Brascamp–Lieb data: construction from representation data, the
//! subspace feasibility criterion, and two lower-bound estimators of the
//! constant (Lieb's variational formula and Gaussian inputs).

mod datum;
mod estimate;
mod feasibility;
mod quadrature;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::rep::RepError;

pub use datum::{build_datum_from_rep, BLDatum, BLMap, DatumMode};
pub use estimate::{estimate_bl_constant, gaussian_ratio, BLEstimate, EstimateOptions, TracePoint};
pub use feasibility::{
    check_feasibility, FeasibilityCertificate, FeasibilityMode, FeasibilityStatus, LATTICE_CAP,
};
pub use quadrature::quadrature_ratio;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BLError {
    #[error("invalid datum: {0}")]
    InvalidDatum(String),
    #[error("exponent {0} exceeds 1; use more maps")]
    InvalidExponent(String),
    #[error("datum has no exact maps; this check needs them")]
    NotExact,
    #[error("kernel lattice exceeded {cap} elements")]
    CapExceeded {
        cap: usize,
        partial: Box<FeasibilityCertificate>,
    },
    #[error("aggregate form is singular")]
    SingularForm,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("scaling condition fails: sum p_j n_j != n")]
    Scaling,
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
