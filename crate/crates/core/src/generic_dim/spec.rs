use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::GenericError;
use crate::linalg::{format_rat, parse_rat, rat, Rat, Subspace};
use crate::rep::{flag_projector, WeightDecomposition};
use crate::seed;

/// Textual description of a test subspace of `V`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SubspaceSpec {
    /// `flag:<mu>`, the flag `V^(mu)`.
    Flag(Rat),
    /// `weight:<mu>`, a single eigenspace.
    Weight(Rat),
    /// `coords:0,2`, a coordinate subspace.
    Coords(Vec<usize>),
    /// `full`
    Full,
    /// `random:<dim>`, a random rational subspace.
    Random(usize),
    /// `perturbed:<mu>`, the flag `V^(mu)` with each basis vector moved by a
    /// small random rational vector.
    Perturbed(Rat),
}

impl SubspaceSpec {
    pub fn resolve(&self, dec: &WeightDecomposition, seed: u64) -> Result<Subspace, GenericError> {
        let n = dec.dim();
        let s = match self {
            SubspaceSpec::Flag(mu) => flag_projector(dec, mu)?.flag,
            SubspaceSpec::Weight(mu) => {
                let level = dec
                    .level(mu)
                    .ok_or_else(|| GenericError::Spec(self.to_string()))?;
                dec.eigenbases[level].clone()
            }
            SubspaceSpec::Coords(idx) => {
                if idx.iter().any(|&i| i >= n) {
                    return Err(GenericError::Spec(self.to_string()));
                }
                Subspace::coordinate(n, idx)
            }
            SubspaceSpec::Full => Subspace::full(n),
            SubspaceSpec::Random(k) => {
                if *k == 0 || *k > n {
                    return Err(GenericError::Spec(self.to_string()));
                }
                random_subspace(n, *k, seed)
            }
            SubspaceSpec::Perturbed(mu) => {
                let flag = flag_projector(dec, mu)?.flag;
                let mut rng = seed::rng(seed);
                loop {
                    let moved: Vec<Vec<Rat>> = flag
                        .basis()
                        .columns()
                        .into_iter()
                        .map(|v| {
                            v.into_iter()
                                .map(|x| x + rat(rng.gen_range(-9..=9), 10 * rng.gen_range(1..=9)))
                                .collect()
                        })
                        .collect();
                    let s = Subspace::from_vectors(n, &moved);
                    if s.dim() == flag.dim() {
                        break s;
                    }
                }
            }
        };
        if s.is_zero() {
            return Err(GenericError::Spec(format!("{self} is the zero subspace")));
        }
        Ok(s)
    }
}

/// Random rational subspace of dimension `k` in `Q^n`.
pub fn random_subspace(n: usize, k: usize, seed: u64) -> Subspace {
    let mut rng = seed::rng(seed);
    loop {
        let vectors: Vec<Vec<Rat>> = (0..k)
            .map(|_| {
                (0..n)
                    .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
                    .collect()
            })
            .collect();
        let s = Subspace::from_vectors(n, &vectors);
        if s.dim() == k {
            return s;
        }
    }
}

/// Every proper nonzero flag `V^(mu)`, `mu > mu_min`, with its spec.
pub fn weight_flag_family(dec: &WeightDecomposition) -> Vec<(SubspaceSpec, Subspace)> {
    dec.eigenvalues[1..]
        .iter()
        .map(|mu| {
            let flag = flag_projector(dec, mu).expect("eigenvalue").flag;
            (SubspaceSpec::Flag(mu.clone()), flag)
        })
        .collect()
}

impl fmt::Display for SubspaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubspaceSpec::Flag(mu) => write!(f, "flag:{}", format_rat(mu)),
            SubspaceSpec::Weight(mu) => write!(f, "weight:{}", format_rat(mu)),
            SubspaceSpec::Coords(idx) => {
                let parts: Vec<String> = idx.iter().map(usize::to_string).collect();
                write!(f, "coords:{}", parts.join(","))
            }
            SubspaceSpec::Full => write!(f, "full"),
            SubspaceSpec::Random(k) => write!(f, "random:{k}"),
            SubspaceSpec::Perturbed(mu) => write!(f, "perturbed:{}", format_rat(mu)),
        }
    }
}

impl FromStr for SubspaceSpec {
    type Err = GenericError;

    fn from_str(s: &str) -> Result<Self, GenericError> {
        let bad = || GenericError::Spec(s.to_string());
        let s = s.trim();
        if s == "full" {
            return Ok(SubspaceSpec::Full);
        }
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        let mu = || parse_rat(arg).map_err(|_| bad());
        Ok(match kind {
            "flag" => SubspaceSpec::Flag(mu()?),
            "weight" => SubspaceSpec::Weight(mu()?),
            "perturbed" => SubspaceSpec::Perturbed(mu()?),
            "random" => SubspaceSpec::Random(arg.trim().parse().map_err(|_| bad())?),
            "coords" => SubspaceSpec::Coords(
                arg.split(',')
                    .map(|t| t.trim().parse())
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad())?,
            ),
            _ => return Err(bad()),
        })
    }
}

impl TryFrom<String> for SubspaceSpec {
    type Error = GenericError;
    fn try_from(s: String) -> Result<Self, GenericError> {
        s.parse()
    }
}

impl From<SubspaceSpec> for String {
    fn from(s: SubspaceSpec) -> String {
        s.to_string()
    }
}
