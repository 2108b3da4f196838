use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{check_scale, DiscretizedError, PointSet, MAX_AMBIENT};

type Key = [i64; MAX_AMBIENT];

/// Index of the half-open cube of side `h` containing each coordinate.
fn cell(x: &[f64], h: &[f64]) -> Key {
    let mut k = [0i64; MAX_AMBIENT];
    for (i, (v, s)) in x.iter().zip(h).enumerate() {
        k[i] = (v / s).floor() as i64;
    }
    k
}

/// Number of distinct cells. Keys are packed into a `u128` and sorted when
/// the index ranges allow it, which is much faster than hashing.
pub(crate) fn count_cells<'a>(points: impl Iterator<Item = &'a [f64]> + Clone, h: &[f64]) -> usize {
    let k = h.len();
    let mut lo = [i64::MAX; MAX_AMBIENT];
    let mut hi = [i64::MIN; MAX_AMBIENT];
    for p in points.clone() {
        let c = cell(p, h);
        for i in 0..k {
            lo[i] = lo[i].min(c[i]);
            hi[i] = hi[i].max(c[i]);
        }
    }
    if lo[0] == i64::MAX {
        return 0;
    }
    let widths: Vec<u32> = (0..k)
        .map(|i| 64 - ((hi[i] - lo[i]) as u64).leading_zeros())
        .collect();
    if widths.iter().sum::<u32>() > 128 {
        return points.map(|p| cell(p, h)).collect::<HashSet<Key>>().len();
    }
    let mut keys: Vec<u128> = points
        .map(|p| {
            let c = cell(p, h);
            (0..k).fold(0u128, |acc, i| (acc << widths[i]) | (c[i] - lo[i]) as u128)
        })
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys.len()
}

/// `|A|_delta` for `delta = 2^-s`: dyadic cubes anchored at 0 that meet `a`.
pub fn covering_number(a: &PointSet, s: u32) -> Result<usize, DiscretizedError> {
    check_scale(s)?;
    let h = vec![2f64.powi(-(s as i32)); a.ambient];
    Ok(count_cells(a.points.iter().map(Vec::as_slice), &h))
}

/// Anisotropic partition: the `k_i` coordinates of level `i` (taken in
/// stored order) are cut at scale `delta^{r_i}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TubeSpec {
    /// `delta = 2^-s`.
    pub s: u32,
    pub r: Vec<f64>,
    pub level_dims: Vec<usize>,
}

impl TubeSpec {
    pub fn validate(&self, ambient: usize) -> Result<(), DiscretizedError> {
        check_scale(self.s)?;
        let bad = |m: &str| Err(DiscretizedError::Spec(m.to_string()));
        if self.r.len() != self.level_dims.len() || self.r.is_empty() {
            return bad("r and level_dims must be nonempty and of equal length");
        }
        if self.r[0] < 0.0
            || self.r.windows(2).any(|w| w[0] > w[1])
            || *self.r.last().unwrap() != 1.0
        {
            return bad("need 0 <= r_1 <= ... <= r_m = 1");
        }
        if self.level_dims.iter().sum::<usize>() != ambient {
            return bad("level dimensions must sum to the ambient dimension");
        }
        Ok(())
    }

    fn sides(&self) -> Vec<f64> {
        let delta = 2f64.powi(-(self.s as i32));
        self.r
            .iter()
            .zip(&self.level_dims)
            .flat_map(|(&r, &k)| {
                let h = if r == 1.0 { delta } else { delta.powf(r) };
                std::iter::repeat(h).take(k)
            })
            .collect()
    }
}

pub fn tube_covering_number(a: &PointSet, spec: &TubeSpec) -> Result<usize, DiscretizedError> {
    spec.validate(a.ambient)?;
    Ok(count_cells(
        a.points.iter().map(Vec::as_slice),
        &spec.sides(),
    ))
}

fn dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// `sum_{w' != w} max(|w' - w|, delta)^-alpha`, Euclidean norm.
pub fn alpha_energy(
    f: &PointSet,
    delta: f64,
    alpha: f64,
    w: &[f64],
) -> Result<f64, DiscretizedError> {
    if !f.points.iter().any(|p| p.as_slice() == w) {
        return Err(DiscretizedError::Membership);
    }
    Ok(energy_at(f, delta, alpha, w))
}

fn energy_at(f: &PointSet, delta: f64, alpha: f64, w: &[f64]) -> f64 {
    f.points
        .iter()
        .filter(|p| p.as_slice() != w)
        .map(|p| dist(p, w).max(delta).powf(-alpha))
        .sum()
}

/// Smallest `C` with `mu_F(B(x, r)) <= C r^alpha` for all `x` in `F` and
/// dyadic `r` in `[2^-s, 1]`, where `mu_F` is normalized counting measure.
/// Radii of at least 1 are allowed to cover everything, so `C >= 1`.
pub fn frostman_constant(f: &PointSet, s: u32, alpha: f64) -> Result<f64, DiscretizedError> {
    check_scale(s)?;
    if f.len() < 2 {
        return Err(DiscretizedError::Spec("need at least two points".into()));
    }
    let total = f.len() as f64;
    let mut c: f64 = 1.0;
    let mut d = Vec::with_capacity(f.len());
    for x in &f.points {
        d.clear();
        d.extend(f.points.iter().map(|y| dist(x, y)));
        d.sort_by(f64::total_cmp);
        for j in 0..=s {
            let r = 2f64.powi(-(j as i32));
            let inside = d.partition_point(|&v| v <= r) as f64;
            c = c.max(inside / total / r.powf(alpha));
        }
    }
    Ok(c)
}

/// Checks `G^(beta)(w) <= 2^n C (1 + 1/(1 - 2^{beta - alpha})) #F` at every `w`,
/// with `C` the Frostman constant at exponent `alpha`.
pub fn frostman_energy_bound_check(
    f: &PointSet,
    s: u32,
    alpha: f64,
    beta: f64,
) -> Result<bool, DiscretizedError> {
    if !(0.0 < beta && beta < alpha) {
        return Err(DiscretizedError::Exponent { alpha, beta });
    }
    let c = frostman_constant(f, s, alpha)?;
    let delta = 2f64.powi(-(s as i32));
    let bound = 2f64.powi(f.ambient as i32)
        * c
        * (1.0 + 1.0 / (1.0 - 2f64.powf(beta - alpha)))
        * f.len() as f64;
    Ok(f.points
        .iter()
        .all(|w| energy_at(f, delta, beta, w) <= bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretized::generate_fractal;

    fn line(xs: &[f64]) -> PointSet {
        PointSet::new(1, xs.iter().map(|&x| vec![x]).collect(), "t").unwrap()
    }

    #[test]
    fn coverings() {
        assert_eq!(covering_number(&line(&[0.3]), 5).unwrap(), 1);
        let eighths: Vec<f64> = (0..8).map(|i| i as f64 / 8.0).collect();
        assert_eq!(covering_number(&line(&eighths), 2).unwrap(), 4);
        let g = generate_fractal(&"grid:6:2".parse().unwrap(), 0).unwrap();
        assert_eq!(covering_number(&g, 6).unwrap(), 4096);
        assert!(covering_number(&g, 0).is_err());
    }

    #[test]
    fn tubes() {
        let g = generate_fractal(&"grid:6:2".parse().unwrap(), 0).unwrap();
        let iso = TubeSpec {
            s: 6,
            r: vec![1.0, 1.0],
            level_dims: vec![1, 1],
        };
        assert_eq!(
            tube_covering_number(&g, &iso).unwrap(),
            covering_number(&g, 6).unwrap()
        );
        // First coordinate at 2^-3, second at 2^-6.
        let aniso = TubeSpec {
            s: 6,
            r: vec![0.5, 1.0],
            level_dims: vec![1, 1],
        };
        assert_eq!(tube_covering_number(&g, &aniso).unwrap(), 8 * 64);
        let bad = TubeSpec {
            s: 6,
            r: vec![1.0, 0.5],
            level_dims: vec![1, 1],
        };
        assert!(tube_covering_number(&g, &bad).is_err());
    }

    #[test]
    fn energies() {
        let d = 1.0 / 16.0;
        let f = line(&[0.0, d, 1.0]);
        assert_eq!(alpha_energy(&f, d, 1.0, &[0.0]).unwrap(), 16.0 + 1.0);
        assert_eq!(alpha_energy(&line(&[0.5]), d, 1.0, &[0.5]).unwrap(), 0.0);
        assert_eq!(
            alpha_energy(&f, d, 1.0, &[0.7]),
            Err(DiscretizedError::Membership)
        );
    }

    #[test]
    fn frostman_uniform() {
        let n = 64;
        let f = line(&(0..n).map(|i| i as f64 / n as f64).collect::<Vec<_>>());
        let c = frostman_constant(&f, 6, 1.0).unwrap();
        assert!((c - 3.0).abs() < 0.1, "{c}");
        assert_eq!(frostman_constant(&f, 6, 0.0).unwrap(), 1.0);
        assert!(frostman_energy_bound_check(&f, 6, 1.0, 0.5).unwrap());
        assert!(frostman_energy_bound_check(&f, 6, 0.5, 0.5).is_err());
    }
}
