use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::sampling::{default_complexity, Sampler};
use super::{modal, GenericError, TrialReport, TrialRow};
use crate::linalg::{subspace_intersect, subspace_sum, Subspace};
use crate::rep::RepConfig;
use crate::seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeOpKind {
    Sum,
    Intersect,
}

/// Rooted tree whose internal vertices combine subspaces by sum or
/// intersection. Leaves name input slots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeOp {
    Leaf(usize),
    Node {
        op: TreeOpKind,
        children: Vec<TreeOp>,
    },
}

impl TreeOp {
    /// Root with `k` leaf children in slot order.
    pub fn star(op: TreeOpKind, k: usize) -> Result<Self, GenericError> {
        Self::node(op, (0..k).map(TreeOp::Leaf).collect())
    }

    pub fn node(op: TreeOpKind, children: Vec<TreeOp>) -> Result<Self, GenericError> {
        let t = TreeOp::Node { op, children };
        t.validate()?;
        Ok(t)
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeOp::Leaf(_) => 1,
            TreeOp::Node { children, .. } => children.iter().map(TreeOp::leaf_count).sum(),
        }
    }

    /// A single leaf has height 1.
    pub fn height(&self) -> usize {
        match self {
            TreeOp::Leaf(_) => 1,
            TreeOp::Node { children, .. } => {
                1 + children.iter().map(TreeOp::height).max().unwrap_or(0)
            }
        }
    }

    /// Every internal vertex has at least two children and the leaf slots
    /// are exactly `0..leaf_count`.
    pub fn validate(&self) -> Result<(), GenericError> {
        let mut slots = Vec::new();
        self.collect(&mut slots)?;
        slots.sort_unstable();
        if slots.iter().enumerate().any(|(i, &s)| i != s) {
            return Err(GenericError::TreeShape(format!(
                "leaf slots {slots:?} are not 0..{}",
                slots.len()
            )));
        }
        Ok(())
    }

    fn collect(&self, slots: &mut Vec<usize>) -> Result<(), GenericError> {
        match self {
            TreeOp::Leaf(s) => slots.push(*s),
            TreeOp::Node { children, .. } => {
                if children.len() < 2 {
                    return Err(GenericError::TreeShape(
                        "internal vertex with fewer than two children".into(),
                    ));
                }
                for c in children {
                    c.collect(slots)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for TreeOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeOp::Leaf(s) => write!(f, "{s}"),
            TreeOp::Node { op, children } => {
                let name = match op {
                    TreeOpKind::Sum => "sum",
                    TreeOpKind::Intersect => "int",
                };
                write!(f, "{name}(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Parses e.g. `sum(0,int(1,2))`.
impl FromStr for TreeOp {
    type Err = GenericError;

    fn from_str(s: &str) -> Result<Self, GenericError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (tree, rest) = parse_tree(&compact)?;
        if !rest.is_empty() {
            return Err(GenericError::TreeShape(format!("trailing input {rest:?}")));
        }
        tree.validate()?;
        Ok(tree)
    }
}

fn parse_tree(s: &str) -> Result<(TreeOp, &str), GenericError> {
    let bad = || GenericError::TreeShape(format!("cannot parse {s:?}"));
    let digits = s.chars().take_while(char::is_ascii_digit).count();
    if digits > 0 {
        let slot = s[..digits].parse().map_err(|_| bad())?;
        return Ok((TreeOp::Leaf(slot), &s[digits..]));
    }
    let (op, mut rest) = if let Some(r) = s.strip_prefix("sum(") {
        (TreeOpKind::Sum, r)
    } else if let Some(r) = s.strip_prefix("int(") {
        (TreeOpKind::Intersect, r)
    } else {
        return Err(bad());
    };
    let mut children = Vec::new();
    loop {
        let (child, r) = parse_tree(rest)?;
        children.push(child);
        if let Some(r) = r.strip_prefix(',') {
            rest = r;
        } else if let Some(r) = r.strip_prefix(')') {
            return Ok((TreeOp::Node { op, children }, r));
        } else {
            return Err(bad());
        }
    }
}

pub fn eval_tree(t: &TreeOp, leaves: &[Subspace]) -> Result<Subspace, GenericError> {
    t.validate()?;
    if leaves.len() != t.leaf_count() {
        return Err(GenericError::TreeShape(format!(
            "tree has {} leaves, got {} subspaces",
            t.leaf_count(),
            leaves.len()
        )));
    }
    eval(t, leaves)
}

fn eval(t: &TreeOp, leaves: &[Subspace]) -> Result<Subspace, GenericError> {
    match t {
        TreeOp::Leaf(s) => Ok(leaves[*s].clone()),
        TreeOp::Node { op, children } => {
            let mut acc = eval(&children[0], leaves)?;
            for c in &children[1..] {
                let next = eval(c, leaves)?;
                acc = match op {
                    TreeOpKind::Sum => subspace_sum(&acc, &next)?,
                    TreeOpKind::Intersect => subspace_intersect(&acc, &next)?,
                };
            }
            Ok(acc)
        }
    }
}

/// Dimension of `T` evaluated on independent translates `h_v.W`, one per
/// leaf; the result is the modal dimension over the trials (`None` on a tie).
pub fn generic_tree_dim(
    cfg: &RepConfig,
    t: &TreeOp,
    w: &Subspace,
    trials: usize,
    seed: u64,
) -> Result<(Option<usize>, TrialReport), GenericError> {
    if trials < 2 {
        return Err(GenericError::TooFewTrials {
            min: 2,
            got: trials,
        });
    }
    if w.ambient_dim() != cfg.n {
        return Err(GenericError::BadSubspace { expected: cfg.n });
    }
    t.validate()?;
    let sampler = Sampler::new(cfg)?;
    let complexity = default_complexity(cfg).max(1);
    let mut rows = Vec::with_capacity(trials);
    for trial in 0..trials {
        let trial_seed = seed::derive(seed, trial as u64);
        let leaves = (0..t.leaf_count())
            .map(|leaf| {
                let h = sampler.sample(seed::derive(trial_seed, leaf as u64), complexity)?;
                Ok(w.image(&h.matrix))
            })
            .collect::<Result<Vec<_>, GenericError>>()?;
        let dim = eval(t, &leaves)?.dim();
        rows.push(TrialRow {
            trial,
            seed: trial_seed,
            dim,
            pass: true,
        });
    }
    let mut report = TrialReport::from_rows(rows, Vec::new());
    let (k, _) = modal(&report.dimension_histogram, trials);
    for r in report.rows.iter_mut() {
        r.pass = Some(r.dim) == k;
    }
    report.passes = report.rows.iter().filter(|r| r.pass).count();
    Ok((k, report))
}
