//! Monte Carlo verification of the generic intersection and projection
//! dimension bounds with exact arithmetic, plus the combinatorics around
//! them (tree operations, spanning tuples, submodularity).

mod bounds;
mod sampling;
mod spec;
mod tree;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::rat::serde_rat;
use crate::linalg::{LinalgError, Rat};
use crate::rep::RepError;

pub use bounds::{
    check_intersection_bound, check_projection_bound, duality_ranks, find_spanning_q,
    intersection_report, intersection_trial, projection_report, projection_trial, sample_trials,
    submodularity_check, ProjectionTrial, SpanningResult,
};
pub use sampling::{default_complexity, sample_element, SampledElement, Sampler};
pub use spec::{random_subspace, weight_flag_family, SubspaceSpec};
pub use tree::{eval_tree, generic_tree_dim, TreeOp, TreeOpKind};

/// Fraction of trials the modal dimension must reach to count as generic.
pub const STABILITY_THRESHOLD: f64 = 0.95;
pub const DEFAULT_TRIALS: usize = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenericError {
    #[error("configuration is reducible; the bound does not apply")]
    Reducible,
    #[error("tree shape: {0}")]
    TreeShape(String),
    #[error("need at least {min} trials, got {got}")]
    TooFewTrials { min: usize, got: usize },
    #[error("complexity must be at least 1")]
    ZeroComplexity,
    #[error("subspace must be nonzero with ambient dimension {expected}")]
    BadSubspace { expected: usize },
    #[error("translates of W fail to span V within n steps; the configuration is not irreducible")]
    IrreducibilityViolation,
    #[error("spanning identity violated: {0}")]
    SpanningIdentity(String),
    #[error("bad subspace spec {0:?}")]
    Spec(String),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Replay information for one trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub seed: u64,
    pub recipe: Vec<RecipeStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecipeStep {
    pub generator: usize,
    #[serde(with = "serde_rat")]
    pub t: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: usize,
    pub seed: u64,
    pub dim: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trials: usize,
    pub passes: usize,
    pub dimension_histogram: BTreeMap<usize, usize>,
    pub witness_failures: Vec<Witness>,
    /// Most frequent dimension; `None` on a tie.
    pub modal_dim: Option<usize>,
    /// Modal dimension reached in at least 95% of trials.
    pub stable: bool,
    /// Trials where the two sides of the projection duality disagreed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duality_mismatches: Option<usize>,
    pub rows: Vec<TrialRow>,
}

impl TrialReport {
    pub(crate) fn from_rows(rows: Vec<TrialRow>, witness_failures: Vec<Witness>) -> Self {
        let mut dimension_histogram = BTreeMap::new();
        for r in &rows {
            *dimension_histogram.entry(r.dim).or_insert(0) += 1;
        }
        let (modal_dim, stable) = modal(&dimension_histogram, rows.len());
        Self {
            trials: rows.len(),
            passes: rows.iter().filter(|r| r.pass).count(),
            dimension_histogram,
            witness_failures,
            modal_dim,
            stable,
            duality_mismatches: None,
            rows,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.passes == self.trials && self.duality_mismatches.unwrap_or(0) == 0
    }
}

/// Unique most frequent key and whether it reaches the stability threshold.
pub(crate) fn modal<K: Clone + Ord>(hist: &BTreeMap<K, usize>, total: usize) -> (Option<K>, bool) {
    let Some(best) = hist.values().max().copied() else {
        return (None, false);
    };
    let mut tops = hist.iter().filter(|(_, &c)| c == best);
    let first = tops.next().map(|(k, _)| k.clone());
    if tops.next().is_some() {
        return (None, false);
    }
    (first, best as f64 >= STABILITY_THRESHOLD * total as f64)
}
