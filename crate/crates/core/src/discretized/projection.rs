use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::covering::count_cells;
use super::{check_scale, covering_number, DiscretizedError, PointSet};
use crate::linalg::rat::{format_rat, serde_rat};
use crate::linalg::Rat;
use crate::rep::{check_proximal, horospherical_basis, weight_decompose, RepConfig};
use crate::seed;

pub const MAX_NUM_U: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectionMode {
    Subcritical,
    Supercritical,
}

impl std::str::FromStr for ProjectionMode {
    type Err = DiscretizedError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "subcritical" => Ok(Self::Subcritical),
            "supercritical" => Ok(Self::Supercritical),
            _ => Err(DiscretizedError::Spec(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionParams {
    #[serde(with = "serde_rat")]
    pub mu: Rat,
    /// `delta = 2^-s`.
    pub s: u32,
    pub epsilon: f64,
    /// Exponent `M` in the per-u threshold `delta^{M eps}`; a run parameter.
    pub m_exponent: f64,
    pub num_u: usize,
    pub seed: u64,
    pub mode: ProjectionMode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct URow {
    pub index: usize,
    /// Coefficients on the expanding generators.
    pub t: Vec<f64>,
    pub covering: usize,
    pub exceptional: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalReport {
    pub mode: ProjectionMode,
    #[serde(with = "serde_rat")]
    pub mu: Rat,
    pub s: u32,
    pub flag_dim: usize,
    pub set_covering: usize,
    /// A projection with fewer cubes than this is exceptional.
    pub covering_threshold: f64,
    pub num_u: usize,
    pub exceptional_count: usize,
    pub exceptional_fraction: f64,
    /// `delta^eps`.
    pub threshold: f64,
    pub passes: bool,
    pub per_u: Vec<URow>,
}

fn exp_nilpotent(x: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.nrows();
    let mut out = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=n {
        term = &term * x / k as f64;
        out += &term;
    }
    out
}

/// Samples `u = exp(sum t_i N_i)` with `t` uniform in `[-1, 1]` on the
/// expanding generators and counts `|pi^(mu)(u.F)|_delta` for each.
pub fn projection_experiment(
    cfg: &RepConfig,
    f: &PointSet,
    params: &ProjectionParams,
) -> Result<ExceptionalReport, DiscretizedError> {
    check_scale(params.s)?;
    if f.ambient != cfg.n {
        return Err(DiscretizedError::Spec(format!(
            "point set lives in dimension {}, representation in {}",
            f.ambient, cfg.n
        )));
    }
    if params.num_u == 0 || params.num_u > MAX_NUM_U {
        return Err(DiscretizedError::Spec(format!("num_u = {}", params.num_u)));
    }
    let dec = weight_decompose(cfg)?;
    if dec.level(&params.mu).is_none() {
        return Err(DiscretizedError::Spec(format!(
            "{} is not a weight",
            format_rat(&params.mu)
        )));
    }
    if params.mode == ProjectionMode::Supercritical {
        if !check_proximal(&dec) {
            return Err(DiscretizedError::Hypothesis(
                "representation is not proximal".into(),
            ));
        }
        if &params.mu != dec.max_eigenvalue() {
            return Err(DiscretizedError::Hypothesis(
                "supercritical mode uses the top weight".into(),
            ));
        }
    }
    let (plus, _) = horospherical_basis(cfg)?;
    let gens: Vec<DMatrix<f64>> = plus.iter().map(|m| m.to_f64()).collect();
    let rows: Vec<usize> = (0..cfg.n)
        .filter(|&i| dec.coordinate_weights[i] >= params.mu)
        .collect();
    let k = rows.len();
    let n = cfg.n;

    let delta = 2f64.powi(-(params.s as i32));
    let set_covering = covering_number(f, params.s)?;
    let shrink = delta.powf(params.m_exponent * params.epsilon);
    let covering_threshold = match params.mode {
        ProjectionMode::Subcritical => shrink * (set_covering as f64).powf(k as f64 / n as f64),
        ProjectionMode::Supercritical => {
            let alpha = (set_covering as f64).log2() / params.s as f64;
            shrink * delta.powf(-alpha / n as f64)
        }
    };

    let sides = vec![delta; k];
    let mut per_u = Vec::with_capacity(params.num_u);
    let mut buf = vec![0.0; k * f.len()];
    for index in 0..params.num_u {
        let mut rng = seed::rng(seed::derive(params.seed, index as u64));
        let t: Vec<f64> = gens.iter().map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let mut x = DMatrix::zeros(n, n);
        for (ti, g) in t.iter().zip(&gens) {
            x += g * *ti;
        }
        let u = exp_nilpotent(&x);
        for (p, out) in f.points.iter().zip(buf.chunks_mut(k)) {
            for (slot, &r) in out.iter_mut().zip(&rows) {
                *slot = (0..n).map(|c| u[(r, c)] * p[c]).sum();
            }
        }
        let covering = count_cells(buf.chunks(k), &sides);
        per_u.push(URow {
            index,
            t,
            covering,
            exceptional: (covering as f64) < covering_threshold,
        });
    }
    let exceptional_count = per_u.iter().filter(|r| r.exceptional).count();
    let exceptional_fraction = exceptional_count as f64 / params.num_u as f64;
    let threshold = delta.powf(params.epsilon);
    Ok(ExceptionalReport {
        mode: params.mode,
        mu: params.mu.clone(),
        s: params.s,
        flag_dim: k,
        set_covering,
        covering_threshold,
        num_u: params.num_u,
        exceptional_count,
        exceptional_fraction,
        threshold,
        passes: exceptional_fraction <= threshold,
        per_u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretized::generate_fractal;
    use crate::linalg::int;
    use crate::rep::{build_config, ConfigKind};

    fn params(mu: i64, mode: ProjectionMode) -> ProjectionParams {
        ProjectionParams {
            mu: int(mu),
            s: 4,
            epsilon: 0.05,
            m_exponent: 1.0,
            num_u: 20,
            seed: 9,
            mode,
        }
    }

    #[test]
    fn single_point_never_exceptional() {
        let cfg = build_config(ConfigKind::SoPq { p: 2, q: 1 }).unwrap();
        let f = PointSet::new(5, vec![vec![0.1, 0.2, 0.3, 0.4, 0.5]], "t").unwrap();
        let r = projection_experiment(&cfg, &f, &params(0, ProjectionMode::Subcritical)).unwrap();
        assert!(r.per_u.iter().all(|u| u.covering == 1 && !u.exceptional));
        assert_eq!(r.exceptional_fraction, 0.0);
    }

    #[test]
    fn full_grid_top_weight() {
        let cfg = build_config(ConfigKind::SoPq { p: 2, q: 1 }).unwrap();
        let f = generate_fractal(&"grid:3:5".parse().unwrap(), 0).unwrap();
        let mut p = params(2, ProjectionMode::Supercritical);
        p.s = 3;
        let r = projection_experiment(&cfg, &f, &p).unwrap();
        assert_eq!(r.flag_dim, 1);
        for u in &r.per_u {
            assert!(u.covering >= 8 && u.covering <= 16 * 8, "{u:?}");
        }
        assert_eq!(r.exceptional_count, 0);
        p.mu = int(0);
        assert!(matches!(
            projection_experiment(&cfg, &f, &p),
            Err(DiscretizedError::Hypothesis(_))
        ));
    }

    #[test]
    fn seeds_and_order() {
        let cfg = build_config(ConfigKind::SoPq { p: 2, q: 1 }).unwrap();
        let f = generate_fractal(&"random:3:5:0.2".parse().unwrap(), 1).unwrap();
        let p = params(0, ProjectionMode::Subcritical);
        let a = projection_experiment(&cfg, &f, &p).unwrap();
        assert_eq!(a, projection_experiment(&cfg, &f, &p).unwrap());
        let mut shuffled = f.clone();
        shuffled.points.reverse();
        let b = projection_experiment(&cfg, &shuffled, &p).unwrap();
        assert_eq!(a.per_u, b.per_u);
    }
}
