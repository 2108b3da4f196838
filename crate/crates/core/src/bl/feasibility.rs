use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{BLDatum, BLError};
use crate::generic_dim::random_subspace;
use crate::linalg::{int, subspace_intersect, subspace_sum, Mat, Rat, Subspace};
use crate::seed;

/// Largest kernel lattice explored before giving up.
pub const LATTICE_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeasibilityMode {
    /// Subspaces generated by the kernels under sums and intersections.
    Lattice,
    /// The lattice plus `count` random subspaces of every dimension.
    LatticePlusRandom { count: usize, seed: u64 },
    /// The lattice plus every coordinate subspace (when `n <= 16`).
    CoordinateExhaustive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FeasibilityStatus {
    /// `dim U > sum p_j dim pi_j(U)`.
    Violated { witness: Subspace },
    /// No violation inside the kernel lattice. Not a proof of finiteness.
    PassedLattice,
    /// No violation in the lattice nor in the extra random or coordinate
    /// subspaces. Not a proof either.
    PassedHeuristic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityCertificate {
    pub scaling_ok: bool,
    pub status: FeasibilityStatus,
    pub lattice_size: usize,
    pub random_checks: usize,
    pub coordinate_checks: usize,
}

impl FeasibilityCertificate {
    /// Scaling holds and no violating subspace was found.
    pub fn is_feasible(&self) -> bool {
        self.scaling_ok && !matches!(self.status, FeasibilityStatus::Violated { .. })
    }

    pub fn witness(&self) -> Option<&Subspace> {
        match &self.status {
            FeasibilityStatus::Violated { witness } => Some(witness),
            _ => None,
        }
    }
}

struct Checker<'a> {
    maps: Vec<&'a Mat>,
    exponents: &'a [Rat],
}

impl Checker<'_> {
    fn violates(&self, u: &Subspace) -> bool {
        if u.is_zero() {
            return false;
        }
        let rhs: Rat = self
            .maps
            .iter()
            .zip(self.exponents)
            .map(|(m, p)| p * int((*m * u.basis()).rank() as i64))
            .sum();
        int(u.dim() as i64) > rhs
    }
}

pub fn check_feasibility(
    d: &BLDatum,
    mode: FeasibilityMode,
) -> Result<FeasibilityCertificate, BLError> {
    let maps = d
        .maps
        .iter()
        .map(|m| m.exact.as_ref())
        .collect::<Option<Vec<_>>>()
        .ok_or(BLError::NotExact)?;
    let checker = Checker {
        maps,
        exponents: &d.exponents,
    };
    let n = d.n;
    let mut cert = FeasibilityCertificate {
        scaling_ok: d.scaling_ok(),
        status: FeasibilityStatus::PassedLattice,
        lattice_size: 0,
        random_checks: 0,
        coordinate_checks: 0,
    };

    let mut seen: HashSet<Subspace> = HashSet::new();
    let mut lattice: Vec<Subspace> = Vec::new();
    let mut pending: Vec<Subspace> = vec![Subspace::zero(n), Subspace::full(n)];
    pending.extend(checker.maps.iter().map(|m| crate::linalg::kernel_basis(m)));
    pending.reverse();
    while let Some(u) = pending.pop() {
        if !seen.insert(u.clone()) {
            continue;
        }
        if seen.len() > LATTICE_CAP {
            cert.lattice_size = lattice.len();
            return Err(BLError::CapExceeded {
                cap: LATTICE_CAP,
                partial: Box::new(cert),
            });
        }
        if checker.violates(&u) {
            cert.lattice_size = lattice.len() + 1;
            cert.status = FeasibilityStatus::Violated { witness: u };
            return Ok(cert);
        }
        for other in &lattice {
            for combined in [subspace_sum(&u, other)?, subspace_intersect(&u, other)?] {
                if !seen.contains(&combined) {
                    pending.push(combined);
                }
            }
        }
        lattice.push(u);
    }
    cert.lattice_size = lattice.len();

    match mode {
        FeasibilityMode::Lattice => {}
        FeasibilityMode::LatticePlusRandom { count, seed: s } => {
            for k in 1..n {
                for i in 0..count {
                    let u = random_subspace(n, k, seed::derive(s, (k * count + i) as u64));
                    cert.random_checks += 1;
                    if checker.violates(&u) {
                        cert.status = FeasibilityStatus::Violated { witness: u };
                        return Ok(cert);
                    }
                }
            }
            cert.status = FeasibilityStatus::PassedHeuristic;
        }
        FeasibilityMode::CoordinateExhaustive => {
            if n <= 16 {
                for mask in 1u32..(1 << n) {
                    let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
                    let u = Subspace::coordinate(n, &idx);
                    cert.coordinate_checks += 1;
                    if checker.violates(&u) {
                        cert.status = FeasibilityStatus::Violated { witness: u };
                        return Ok(cert);
                    }
                }
            }
            cert.status = FeasibilityStatus::PassedHeuristic;
        }
    }
    Ok(cert)
}
