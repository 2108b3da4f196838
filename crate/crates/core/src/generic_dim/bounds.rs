use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::sampling::{default_complexity, SampledElement, Sampler};
use super::{modal, GenericError, TrialReport, TrialRow};
use crate::linalg::{
    orthogonal_complement, orthogonal_projector, subspace_intersect, subspace_sum, LinalgError,
    Mat, Subspace,
};
use crate::rep::{check_irreducible, IrreducibleVerdict, RepConfig};
use crate::seed;

fn check_subspace(cfg: &RepConfig, s: &Subspace) -> Result<(), GenericError> {
    if s.ambient_dim() != cfg.n || s.is_zero() {
        return Err(GenericError::BadSubspace { expected: cfg.n });
    }
    Ok(())
}

fn require_irreducible(cfg: &RepConfig) -> Result<(), GenericError> {
    match check_irreducible(cfg) {
        IrreducibleVerdict::Reducible { .. } => Err(GenericError::Reducible),
        _ => Ok(()),
    }
}

/// One sampled element per trial, seeded by `(seed, trial)`.
pub fn sample_trials(
    cfg: &RepConfig,
    trials: usize,
    seed: u64,
) -> Result<Vec<SampledElement>, GenericError> {
    let sampler = Sampler::new(cfg)?;
    let complexity = default_complexity(cfg).max(1);
    (0..trials)
        .map(|t| sampler.sample(seed::derive(seed, t as u64), complexity))
        .collect()
}

/// `dim((h.W) ∩ W')` and whether it satisfies `d <= (dim W / n) dim W'`.
pub fn intersection_trial(
    h: &Mat,
    w: &Subspace,
    w_prime: &Subspace,
) -> Result<(usize, bool), LinalgError> {
    let n = w.ambient_dim();
    let d = subspace_intersect(&w.image(h), w_prime)?.dim();
    Ok((d, d * n <= w.dim() * w_prime.dim()))
}

/// Result of one projection trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProjectionTrial {
    /// Rank of the orthogonal projection onto `h.W` restricted to `W'`.
    pub rank: usize,
    pub pass: bool,
    /// `(rank(π_W ∘ h |_{W'}), rank(π_{h^t.W} |_{W'}))`.
    pub duality: (usize, usize),
}

pub fn projection_trial(
    h: &Mat,
    w: &Subspace,
    w_prime: &Subspace,
) -> Result<ProjectionTrial, LinalgError> {
    let n = w.ambient_dim();
    let hw = w.image(h);
    let rank = w_prime.dim() - subspace_intersect(w_prime, &orthogonal_complement(&hw))?.dim();
    Ok(ProjectionTrial {
        rank,
        pass: rank * n >= w.dim() * w_prime.dim(),
        duality: duality_ranks(h, w, w_prime),
    })
}

/// Both sides of the duality between projecting after `h` and projecting
/// onto `h^t.W`, each computed with exact projector matrices.
pub fn duality_ranks(h: &Mat, w: &Subspace, w_prime: &Subspace) -> (usize, usize) {
    let left = &(&orthogonal_projector(w) * h) * w_prime.basis();
    let ht_w = w.image(&h.transpose());
    let right = &orthogonal_projector(&ht_w) * w_prime.basis();
    (left.rank(), right.rank())
}

pub fn check_intersection_bound(
    cfg: &RepConfig,
    w: &Subspace,
    w_prime: &Subspace,
    trials: usize,
    seed: u64,
) -> Result<TrialReport, GenericError> {
    check_subspace(cfg, w)?;
    check_subspace(cfg, w_prime)?;
    require_irreducible(cfg)?;
    let batch = sample_trials(cfg, trials, seed)?;
    intersection_report(&batch, w, w_prime)
}

/// Intersection report over pre-sampled elements; lets several `(W, W')`
/// pairs share one batch.
pub fn intersection_report(
    batch: &[SampledElement],
    w: &Subspace,
    w_prime: &Subspace,
) -> Result<TrialReport, GenericError> {
    let mut rows = Vec::with_capacity(batch.len());
    let mut failures = Vec::new();
    for (trial, h) in batch.iter().enumerate() {
        let (dim, pass) = intersection_trial(&h.matrix, w, w_prime)?;
        if !pass {
            failures.push(h.witness());
        }
        rows.push(TrialRow {
            trial,
            seed: h.seed,
            dim,
            pass,
        });
    }
    Ok(TrialReport::from_rows(rows, failures))
}

pub fn check_projection_bound(
    cfg: &RepConfig,
    w: &Subspace,
    w_prime: &Subspace,
    trials: usize,
    seed: u64,
) -> Result<TrialReport, GenericError> {
    check_subspace(cfg, w)?;
    check_subspace(cfg, w_prime)?;
    require_irreducible(cfg)?;
    let batch = sample_trials(cfg, trials, seed)?;
    projection_report(&batch, w, w_prime)
}

pub fn projection_report(
    batch: &[SampledElement],
    w: &Subspace,
    w_prime: &Subspace,
) -> Result<TrialReport, GenericError> {
    let mut rows = Vec::with_capacity(batch.len());
    let mut failures = Vec::new();
    let mut mismatches = 0;
    for (trial, h) in batch.iter().enumerate() {
        let t = projection_trial(&h.matrix, w, w_prime)?;
        let dual_ok = t.duality.0 == t.duality.1;
        if !dual_ok {
            mismatches += 1;
        }
        if !t.pass || !dual_ok {
            failures.push(h.witness());
        }
        rows.push(TrialRow {
            trial,
            seed: h.seed,
            dim: t.rank,
            pass: t.pass,
        });
    }
    let mut report = TrialReport::from_rows(rows, failures);
    report.duality_mismatches = Some(mismatches);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningResult {
    /// Generic number of translates of `W` needed to span `V`.
    pub q: usize,
    /// `k_{q'} = dim((Σ_{i<q'} h_i.W) ∩ h_{q'}.W)` for `q' = 2..=q`.
    pub k_list: Vec<usize>,
    pub trials: usize,
    /// Trials whose `(q, k_list)` equals the modal value.
    pub agreeing: usize,
    pub stable: bool,
}

pub fn find_spanning_q(
    cfg: &RepConfig,
    w: &Subspace,
    trials: usize,
    seed: u64,
) -> Result<SpanningResult, GenericError> {
    check_subspace(cfg, w)?;
    if trials < 1 {
        return Err(GenericError::TooFewTrials {
            min: 1,
            got: trials,
        });
    }
    require_irreducible(cfg)?;
    let sampler = Sampler::new(cfg)?;
    let complexity = default_complexity(cfg).max(1);
    let n = cfg.n;
    let k = w.dim();
    let mut hist: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
    for trial in 0..trials {
        let trial_seed = seed::derive(seed, trial as u64);
        let translate = |i: usize| -> Result<Subspace, GenericError> {
            let h = sampler.sample(seed::derive(trial_seed, i as u64), complexity)?;
            Ok(w.image(&h.matrix))
        };
        let mut span = translate(0)?;
        let mut k_list = Vec::new();
        let mut q = 1;
        while !span.is_full() {
            if q >= n {
                return Err(GenericError::IrreducibilityViolation);
            }
            let next = translate(q)?;
            k_list.push(subspace_intersect(&span, &next)?.dim());
            span = subspace_sum(&span, &next)?;
            q += 1;
        }
        *hist.entry((q, k_list)).or_insert(0) += 1;
    }
    let (best, stable) = modal(&hist, trials);
    let (q, k_list) =
        best.ok_or_else(|| GenericError::SpanningIdentity("no unique modal (q, k_list)".into()))?;
    let agreeing = hist[&(q, k_list.clone())];
    if let Some(bad) = k_list.iter().find(|&&kq| kq >= k) {
        return Err(GenericError::SpanningIdentity(format!(
            "k_q' = {bad} is not below k = {k}"
        )));
    }
    let total: usize = k_list.iter().sum();
    if total + n != q * k {
        return Err(GenericError::SpanningIdentity(format!(
            "sum k_q' = {total} but qk - n = {}",
            q as i64 * k as i64 - n as i64
        )));
    }
    Ok(SpanningResult {
        q,
        k_list,
        trials,
        agreeing,
        stable,
    })
}

/// `dim W'∩W1∩W2 + dim W'∩(W1+W2) >= dim W'∩W1 + dim W'∩W2`.
pub fn submodularity_check(
    w_prime: &Subspace,
    w1: &Subspace,
    w2: &Subspace,
) -> Result<bool, GenericError> {
    let a = subspace_intersect(w_prime, w1)?;
    let b = subspace_intersect(w_prime, w2)?;
    let both = subspace_intersect(&a, w2)?;
    let sum = subspace_intersect(w_prime, &subspace_sum(w1, w2)?)?;
    Ok(both.dim() + sum.dim() >= a.dim() + b.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;
    use crate::rep::{build_config, flag_projector, weight_decompose, ConfigKind};

    fn flag(cfg: &RepConfig, mu: i64) -> Subspace {
        let dec = weight_decompose(cfg).unwrap();
        flag_projector(&dec, &int(mu)).unwrap().flag
    }

    #[test]
    fn tensor_plane_pair_meets_bound_with_equality() {
        let cfg = build_config(ConfigKind::TensorStd { n: 2, m: 2 }).unwrap();
        // Sorted coordinates: e2e2, e1e2, e2e1, e1e1.
        let w = Subspace::coordinate(4, &[2, 3]);
        let w_prime = Subspace::coordinate(4, &[1, 3]);
        let r = check_intersection_bound(&cfg, &w, &w_prime, 30, 4).unwrap();
        assert_eq!(r.passes, 30);
        assert_eq!(r.dimension_histogram.get(&1), Some(&30));
    }

    #[test]
    fn sym2_line_avoids_plane() {
        let cfg = build_config(ConfigKind::Sl2Sym { k: 2 }).unwrap();
        let r = check_intersection_bound(&cfg, &flag(&cfg, 2), &flag(&cfg, 0), 30, 1).unwrap();
        assert_eq!(r.modal_dim, Some(0));
        assert!(r.all_pass());
    }

    #[test]
    fn full_space_cases() {
        let cfg = build_config(ConfigKind::SoPq { p: 2, q: 1 }).unwrap();
        let full = Subspace::full(5);
        let wp = flag(&cfg, 1);
        let r = check_intersection_bound(&cfg, &full, &wp, 5, 2).unwrap();
        assert_eq!(r.dimension_histogram.get(&2), Some(&5));
        let p = check_projection_bound(&cfg, &full, &wp, 5, 2).unwrap();
        assert_eq!(p.dimension_histogram.get(&2), Some(&5));
        let top = check_projection_bound(&cfg, &flag(&cfg, 2), &full, 20, 2).unwrap();
        assert_eq!(top.modal_dim, Some(1));
        assert!(top.all_pass());
        assert!(check_intersection_bound(&cfg, &Subspace::zero(5), &wp, 5, 2).is_err());
    }

    #[test]
    fn reducible_configs_are_rejected() {
        let sym = build_config(ConfigKind::Sl2Sym { k: 1 }).unwrap();
        let double = |m: &Mat| m.kron(&Mat::identity(2));
        let cfg = RepConfig::from_parts(
            "double",
            sym.h_basis.iter().map(double).collect(),
            double(&sym.a_action),
        )
        .unwrap();
        let w = Subspace::coordinate(4, &[0]);
        assert!(matches!(
            check_intersection_bound(&cfg, &w, &w, 3, 0),
            Err(GenericError::Reducible)
        ));
    }

    #[test]
    fn spanning_examples() {
        let sym = build_config(ConfigKind::Sl2Sym { k: 2 }).unwrap();
        let s = find_spanning_q(&sym, &flag(&sym, 2), 20, 3).unwrap();
        assert_eq!((s.q, s.k_list.clone()), (3, vec![0, 0]));
        let so = build_config(ConfigKind::SoPq { p: 2, q: 1 }).unwrap();
        let s = find_spanning_q(&so, &flag(&so, 1), 20, 3).unwrap();
        assert_eq!((s.q, s.k_list.clone()), (3, vec![0, 1]));
        let s = find_spanning_q(&so, &flag(&so, -1), 20, 3).unwrap();
        assert_eq!((s.q, s.k_list.clone()), (2, vec![3]));
    }

    #[test]
    fn submodularity_examples() {
        let e = |idx: &[usize]| Subspace::coordinate(3, idx);
        assert!(submodularity_check(&e(&[0, 1]), &e(&[0]), &e(&[1])).unwrap());
        assert!(submodularity_check(&e(&[0, 1]), &e(&[1, 2]), &e(&[1, 2])).unwrap());
        assert!(submodularity_check(&e(&[0]), &e(&[0]), &Subspace::zero(4)).is_err());
    }

    #[test]
    fn duality_on_identity() {
        let w = Subspace::coordinate(3, &[0]);
        let wp = Subspace::coordinate(3, &[0, 1]);
        assert_eq!(duality_ranks(&Mat::identity(3), &w, &wp), (1, 1));
    }
}
