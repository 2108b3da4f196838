//! Exact `(H, a, V)` configurations: the example families, weight
//! decompositions, flags and the irreducibility/proximality hypotheses.

mod config;
mod families;
mod irreducible;
mod weights;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::LinalgError;

pub use config::RepConfig;
pub use families::build_config;
pub use irreducible::{check_irreducible, IrreducibleVerdict};
pub use weights::{
    check_proximal, flag_projector, horospherical_basis, weight_decompose, FlagProjector,
    WeightDecomposition,
};

/// Largest supported `dim V`.
pub const MAX_DIM: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("rationality: {0}")]
    Rationality(String),
    #[error("{0} is not an eigenvalue of a")]
    InvalidLevel(String),
    #[error("configuration lacks the internal action of h")]
    IncompleteConfig,
    #[error("bracket closure fails: {0}")]
    BracketClosure(String),
    #[error("bad config descriptor {0:?}")]
    Parse(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Simple Lie algebras used by the diagonal family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SimpleKind {
    /// `sl_d`
    Sl(usize),
    /// `sp_{2n}`, stored by `n`
    Sp(usize),
}

/// Descriptor of one of the example families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConfigKind {
    /// `SO(Q0) ⊂ SL_{p+q}` acting on the trace-form complement.
    SoPq { p: usize, q: usize },
    /// `Sp_{2n} ⊂ SL_{2n}` acting on the trace-form complement.
    Sp2n { n: usize },
    /// `G0` embedded diagonally in `G0 × G0`; `V` is the adjoint of `G0`.
    Diagonal(SimpleKind),
    /// `SL_n × SL_m` on `sl_n ⊗ sl_m`.
    Tensor { n: usize, m: usize },
    /// `SL_n × SL_m` on `R^n ⊗ R^m`.
    TensorStd { n: usize, m: usize },
    /// Principal `SL_2` on `Sym^k(R^2)`.
    Sl2Sym { k: usize },
}

impl fmt::Display for SimpleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleKind::Sl(d) => write!(f, "sl{d}"),
            SimpleKind::Sp(n) => write!(f, "sp{}", 2 * n),
        }
    }
}

impl fmt::Display for ConfigKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigKind::SoPq { p, q } => write!(f, "so_pq:{p},{q}"),
            ConfigKind::Sp2n { n } => write!(f, "sp2n:{n}"),
            ConfigKind::Diagonal(g) => write!(f, "diagonal:{g}"),
            ConfigKind::Tensor { n, m } => write!(f, "tensor:{n},{m}"),
            ConfigKind::TensorStd { n, m } => write!(f, "tensor_std:{n},{m}"),
            ConfigKind::Sl2Sym { k } => write!(f, "sl2_sym:{k}"),
        }
    }
}

impl FromStr for ConfigKind {
    type Err = RepError;

    /// Parses `so_pq:2,1`, `sp2n:2`, `diagonal:sl3`, `diagonal:sp4`,
    /// `tensor:2,2`, `tensor_std:2,3`, `sl2_sym:4`.
    fn from_str(s: &str) -> Result<Self, RepError> {
        let bad = || RepError::Parse(s.to_string());
        let (family, args) = s.trim().split_once(':').ok_or_else(bad)?;
        let nums = |expected: usize| -> Result<Vec<usize>, RepError> {
            let v: Vec<usize> = args
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| bad())?;
            if v.len() == expected {
                Ok(v)
            } else {
                Err(bad())
            }
        };
        Ok(match family.trim() {
            "so_pq" => {
                let v = nums(2)?;
                ConfigKind::SoPq { p: v[0], q: v[1] }
            }
            "sp2n" => ConfigKind::Sp2n { n: nums(1)?[0] },
            "tensor" => {
                let v = nums(2)?;
                ConfigKind::Tensor { n: v[0], m: v[1] }
            }
            "tensor_std" => {
                let v = nums(2)?;
                ConfigKind::TensorStd { n: v[0], m: v[1] }
            }
            "sl2_sym" => ConfigKind::Sl2Sym { k: nums(1)?[0] },
            "diagonal" => {
                let a = args.trim();
                if let Some(d) = a.strip_prefix("sl") {
                    ConfigKind::Diagonal(SimpleKind::Sl(d.parse().map_err(|_| bad())?))
                } else if let Some(d) = a.strip_prefix("sp") {
                    let two_n: usize = d.parse().map_err(|_| bad())?;
                    if two_n % 2 != 0 {
                        return Err(bad());
                    }
                    ConfigKind::Diagonal(SimpleKind::Sp(two_n / 2))
                } else {
                    return Err(bad());
                }
            }
            _ => return Err(bad()),
        })
    }
}
