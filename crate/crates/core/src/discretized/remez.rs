use rand::Rng;
use serde::{Deserialize, Serialize};

use super::DiscretizedError;
use crate::seed;

const MIN_SAMPLES: usize = 10_000;
const GRID_BUDGET: f64 = 1e4;

/// Real polynomial in `vars` variables as a list of (exponents, coefficient).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub vars: usize,
    pub degree: u32,
    pub terms: Vec<(Vec<u32>, f64)>,
}

impl Polynomial {
    pub fn new(vars: usize, terms: Vec<(Vec<u32>, f64)>) -> Result<Self, DiscretizedError> {
        if vars == 0 || terms.iter().any(|(e, c)| e.len() != vars || !c.is_finite()) {
            return Err(DiscretizedError::Spec("malformed polynomial".into()));
        }
        let degree = terms
            .iter()
            .map(|(e, _)| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0);
        Ok(Self {
            vars,
            degree,
            terms,
        })
    }

    /// Every monomial of total degree at most `degree`, coefficients uniform in `[-1, 1]`.
    pub fn random(vars: usize, degree: u32, seed: u64) -> Self {
        let mut rng = seed::rng(seed);
        let mut exps = vec![vec![]];
        for _ in 0..vars {
            exps = exps
                .into_iter()
                .flat_map(|e: Vec<u32>| {
                    let used: u32 = e.iter().sum();
                    (0..=degree - used).map(move |k| {
                        let mut f = e.clone();
                        f.push(k);
                        f
                    })
                })
                .collect();
        }
        let terms = exps
            .into_iter()
            .map(|e| (e, rng.gen_range(-1.0..=1.0)))
            .collect();
        Self {
            vars,
            degree,
            terms,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                c * e
                    .iter()
                    .zip(x)
                    .map(|(&k, v)| v.powi(k as i32))
                    .product::<f64>()
            })
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(_, c)| *c == 0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemezReport {
    /// Monte Carlo estimate of `Leb{|P| < eps} / Leb(B)`.
    pub empirical_measure: f64,
    pub bound: f64,
    /// Grid and sample maximum of `|P|`; a lower bound for the true sup.
    pub sup_norm: f64,
    pub constant: f64,
    pub ok: bool,
}

/// Compares the sublevel measure of `|P| < eps` on a box with
/// `C (eps / ||P||)^{1/(dk)}`; `C` defaults to `4^{dk}`.
pub fn remez_check(
    p: &Polynomial,
    bounds: &[(f64, f64)],
    eps: f64,
    samples: usize,
    seed: u64,
    constant: Option<f64>,
) -> Result<RemezReport, DiscretizedError> {
    if p.is_zero() {
        return Err(DiscretizedError::Degenerate);
    }
    if samples < MIN_SAMPLES {
        return Err(DiscretizedError::Spec(format!(
            "need at least {MIN_SAMPLES} samples"
        )));
    }
    if bounds.len() != p.vars || bounds.iter().any(|(lo, hi)| !(lo < hi)) || eps <= 0.0 {
        return Err(DiscretizedError::Spec("malformed box or eps".into()));
    }
    let d = p.vars;
    // Constants count as degree one so the exponent stays finite.
    let dk = (d as u32 * p.degree.max(1)) as f64;
    let c = constant.unwrap_or_else(|| 4f64.powf(dk));

    let per_axis = (GRID_BUDGET.powf(1.0 / d as f64).ceil() as usize).max(2);
    let mut sup: f64 = 0.0;
    let mut idx = vec![0usize; d];
    let mut x = vec![0.0; d];
    'grid: loop {
        for i in 0..d {
            let (lo, hi) = bounds[i];
            x[i] = lo + (hi - lo) * idx[i] as f64 / (per_axis - 1) as f64;
        }
        sup = sup.max(p.eval(&x).abs());
        for axis in 0..=d {
            if axis == d {
                break 'grid;
            }
            idx[axis] += 1;
            if idx[axis] < per_axis {
                break;
            }
            idx[axis] = 0;
        }
    }

    let mut rng = seed::rng(seed);
    let mut below = 0usize;
    for _ in 0..samples {
        for (xi, (lo, hi)) in x.iter_mut().zip(bounds) {
            *xi = rng.gen_range(*lo..*hi);
        }
        let v = p.eval(&x).abs();
        sup = sup.max(v);
        if v < eps {
            below += 1;
        }
    }
    let empirical_measure = below as f64 / samples as f64;
    let bound = c * (eps / sup).powf(1.0 / dk);
    Ok(RemezReport {
        empirical_measure,
        bound,
        sup_norm: sup,
        constant: c,
        ok: empirical_measure <= bound,
    })
}
