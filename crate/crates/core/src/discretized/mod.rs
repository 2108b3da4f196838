//! Discretized geometry at dyadic scales: covering numbers, truncated
//! energies, Frostman constants, projection experiments and a Remez
//! sublevel check.

mod covering;
mod points;
mod projection;
mod remez;

use thiserror::Error;

use crate::rep::RepError;

pub use covering::{
    alpha_energy, covering_number, frostman_constant, frostman_energy_bound_check,
    tube_covering_number, TubeSpec,
};
pub use points::{generate_fractal, FractalDesc, PointSet, MAX_AMBIENT, MAX_POINTS};
pub use projection::{
    projection_experiment, ExceptionalReport, ProjectionMode, ProjectionParams, URow,
};
pub use remez::{remez_check, Polynomial, RemezReport};

/// Finest supported dyadic exponent: scales are `2^-s` with `1 <= s <= 40`.
pub const MAX_SCALE_EXPONENT: u32 = 40;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiscretizedError {
    #[error("scale exponent {0} outside 1..=40")]
    Scale(u32),
    #[error("malformed spec: {0}")]
    Spec(String),
    #[error("point is not in the set")]
    Membership,
    #[error("need 0 < beta < alpha, got alpha={alpha}, beta={beta}")]
    Exponent { alpha: f64, beta: f64 },
    #[error("{0} points exceeds the cap")]
    Size(usize),
    #[error("hypothesis fails: {0}")]
    Hypothesis(String),
    #[error("zero polynomial")]
    Degenerate,
    #[error(transparent)]
    Rep(#[from] RepError),
}

pub(crate) fn check_scale(s: u32) -> Result<(), DiscretizedError> {
    if (1..=MAX_SCALE_EXPONENT).contains(&s) {
        Ok(())
    } else {
        Err(DiscretizedError::Scale(s))
    }
}
