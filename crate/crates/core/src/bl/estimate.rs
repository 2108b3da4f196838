use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use num_traits::{One, Signed};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{BLDatum, BLError};
use crate::linalg::rat::ln_abs;
use crate::linalg::{Mat, Rat};
use crate::seed;

/// Both estimators stop once `F` falls below this; the datum is then
/// reported as having infinite constant.
const INFINITE_THRESHOLD: f64 = 1e-6;
const STOP_LOG_F: f64 = -20.0;
const ARMIJO: f64 = 1e-4;
const DET_GUARD: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateOptions {
    /// Iterations per estimator, split evenly over the restarts.
    pub budget: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl EstimateOptions {
    pub fn new(budget: usize, seed: u64) -> Self {
        Self {
            budget,
            restarts: 8,
            seed,
        }
    }
}

/// Best-so-far values after a given global iteration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub variational: f64,
    pub gaussian: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BLEstimate {
    /// `1 / F` at the best point found; `F` is Lieb's Hilbert–Schmidt product.
    pub lower_bound_variational: f64,
    /// Best Gaussian ratio found.
    pub lower_bound_gaussian: f64,
    pub iterations: usize,
    /// Both bounds agree to relative 1e-3 over the final 10% of the budget.
    pub converged: bool,
    /// `F` fell below 1e-6: the constant is (numerically) infinite.
    pub bl_infinite: bool,
    /// Smallest `F` reached, for the datum with orthonormalized rows.
    pub min_f: f64,
    pub trace: Vec<TracePoint>,
}

struct Problem {
    n: usize,
    maps: Vec<DMatrix<f64>>,
    dims: Vec<usize>,
    p: Vec<f64>,
    /// `log BL(original) - log BL(maps used here)`.
    log_shift: f64,
}

impl Problem {
    /// Replaces each map by `(pi pi^T)^{-1/2} pi`, which has orthonormal rows.
    /// Exact maps are first rewritten as `E pi` over a dominant column basis
    /// (see `dominant_form`), so huge entries never reach floating point;
    /// float maps are divided by their largest entry. A change of target
    /// basis `B` multiplies the constant by `|det B|^{-p_j}`; the total is
    /// recorded in `log_shift`, and the `F < 1e-6` test becomes independent
    /// of scale.
    fn new(d: &BLDatum) -> Result<Self, BLError> {
        let p = d.exponents_f64();
        let mut log_shift = 0.0;
        let mut maps = Vec::with_capacity(d.maps.len());
        for (m, pj) in d.maps.iter().zip(&p) {
            let base = match &m.exact {
                Some(e) => {
                    let (r, minor) = dominant_form(e)?;
                    // E = minor^{-1}, so log |det E| = -log |det minor|.
                    log_shift -= pj * ln_abs(&minor);
                    r.to_f64()
                }
                None => {
                    let scale = m.matrix.amax();
                    if !(scale.is_finite() && scale > 0.0) {
                        return Err(BLError::InvalidDatum(
                            "map has non-finite or zero entries".into(),
                        ));
                    }
                    log_shift -= pj * m.nj as f64 * scale.ln();
                    &m.matrix / scale
                }
            };
            let eig = SymmetricEigen::new(&base * base.transpose());
            if eig.eigenvalues.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
                return Err(BLError::InvalidDatum(
                    "maps are numerically rank deficient".into(),
                ));
            }
            log_shift -= 0.5 * pj * eig.eigenvalues.iter().map(|l| l.ln()).sum::<f64>();
            let inv_sqrt = eig.eigenvalues.map(|l| l.powf(-0.5));
            maps.push(
                &eig.eigenvectors
                    * DMatrix::from_diagonal(&inv_sqrt)
                    * eig.eigenvectors.transpose()
                    * base,
            );
        }
        Ok(Self {
            n: d.n,
            maps,
            dims: d.maps.iter().map(|m| m.nj).collect(),
            p,
            log_shift,
        })
    }

    fn coeff(&self, j: usize) -> f64 {
        self.p[j] * self.dims[j] as f64 / 2.0
    }

    /// `log F(A, A_j) = sum (p_j n_j / 2)(log ||A_j pi_j A^t||^2 - log n_j)`.
    fn log_f(&self, a: &DMatrix<f64>, aj: &[DMatrix<f64>]) -> f64 {
        let at = a.transpose();
        (0..self.maps.len())
            .map(|j| {
                let c = self.coeff(j);
                if c == 0.0 {
                    return 0.0;
                }
                let t = (&aj[j] * &self.maps[j] * &at).norm_squared();
                c * (t.ln() - (self.dims[j] as f64).ln())
            })
            .sum()
    }

    /// Traceless symmetric gradients for the multiplicative updates
    /// `A <- exp(eps X) A`, `A_j <- exp(eps Y_j) A_j`.
    fn log_f_grad(
        &self,
        a: &DMatrix<f64>,
        aj: &[DMatrix<f64>],
    ) -> (DMatrix<f64>, Vec<DMatrix<f64>>) {
        let at = a.transpose();
        let mut gx = DMatrix::zeros(self.n, self.n);
        let mut gy = Vec::with_capacity(self.maps.len());
        for j in 0..self.maps.len() {
            let c = self.coeff(j);
            let b = &aj[j] * &self.maps[j] * &at; // n_j x n
            let t = b.norm_squared();
            if c == 0.0 || t == 0.0 {
                gy.push(DMatrix::zeros(self.dims[j], self.dims[j]));
                continue;
            }
            let s = 2.0 * c / t;
            gx += (b.transpose() * &b) * s;
            gy.push(traceless(&(&b * b.transpose()) * s));
        }
        (traceless(gx), gy)
    }

    /// `K = sum p_j pi_j^T M_j pi_j`.
    fn aggregate(&self, m: &[DMatrix<f64>]) -> DMatrix<f64> {
        let mut k = DMatrix::zeros(self.n, self.n);
        for (j, mj) in m.iter().enumerate() {
            k += (self.maps[j].transpose() * mj * &self.maps[j]) * self.p[j];
        }
        k
    }

    /// `log` of the Gaussian ratio, or `None` if the aggregate form degenerates.
    fn log_ratio(&self, m: &[DMatrix<f64>]) -> Option<f64> {
        let k = self.aggregate(m);
        let kdet = logdet_pd(&k)?;
        let mut total = -0.5 * kdet;
        for (j, mj) in m.iter().enumerate() {
            total += 0.5 * self.p[j] * logdet_pd(mj)?;
        }
        Some(total)
    }
}

fn traceless(mut m: DMatrix<f64>) -> DMatrix<f64> {
    let d = m.nrows();
    let tr = m.trace() / d as f64;
    for i in 0..d {
        m[(i, i)] -= tr;
    }
    m
}

fn expm_sym(s: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(s.clone());
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::exp));
    &eig.eigenvectors * d * eig.eigenvectors.transpose()
}

fn logdet_pd(m: &DMatrix<f64>) -> Option<f64> {
    let chol = Cholesky::new(m.clone())?;
    let l = chol.l();
    let logdet: f64 = 2.0 * l.diagonal().iter().map(|x| x.ln()).sum::<f64>();
    (logdet.is_finite() && logdet > DET_GUARD.ln()).then_some(logdet)
}

/// Rescales to determinant one.
fn unimodular(mut a: DMatrix<f64>) -> DMatrix<f64> {
    let det = a.determinant();
    if det > 0.0 && det.is_finite() {
        a /= det.powf(1.0 / a.nrows() as f64);
    }
    a
}

fn random_sym<R: Rng>(rng: &mut R, d: usize, scale: f64) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let v = rng.gen_range(-scale..scale);
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    traceless(s)
}

fn frob2(ms: &[DMatrix<f64>]) -> f64 {
    ms.iter().map(|m| m.norm_squared()).sum()
}

/// Gradient descent on `log F` with backtracking; returns the lowest value
/// reached and the number of iterations used.
fn run_variational<R: Rng>(
    pb: &Problem,
    iters: usize,
    rng: Option<&mut R>,
    mut on_iter: impl FnMut(usize, f64),
) -> f64 {
    let (mut a, mut aj) = match rng {
        None => (
            DMatrix::identity(pb.n, pb.n),
            pb.dims
                .iter()
                .map(|&d| DMatrix::identity(d, d))
                .collect::<Vec<_>>(),
        ),
        Some(r) => (
            expm_sym(&random_sym(r, pb.n, 0.5)),
            pb.dims
                .iter()
                .map(|&d| expm_sym(&random_sym(r, d, 0.5)))
                .collect(),
        ),
    };
    let mut f = pb.log_f(&a, &aj);
    let mut step = 0.5;
    for it in 0..iters {
        if f < STOP_LOG_F {
            on_iter(it, f);
            continue;
        }
        let (gx, gy) = pb.log_f_grad(&a, &aj);
        let g2 = gx.norm_squared() + frob2(&gy);
        if g2 < 1e-24 {
            on_iter(it, f);
            continue;
        }
        let mut accepted = false;
        for _ in 0..50 {
            let na = unimodular(expm_sym(&(&gx * -step)) * &a);
            let naj: Vec<DMatrix<f64>> = aj
                .iter()
                .zip(&gy)
                .map(|(m, g)| unimodular(expm_sym(&(g * -step)) * m))
                .collect();
            let nf = pb.log_f(&na, &naj);
            if nf.is_finite() && nf <= f - ARMIJO * step * g2 {
                a = na;
                aj = naj;
                f = nf;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if accepted {
            step = (step * 2.0).min(1e3);
        } else {
            step = 0.5;
        }
        on_iter(it, f);
    }
    f
}

/// Gradient ascent on the log Gaussian ratio over Cholesky factors
/// `M_j = L_j L_j^T`.
fn run_gaussian<R: Rng>(
    pb: &Problem,
    iters: usize,
    rng: Option<&mut R>,
    mut on_iter: impl FnMut(usize, f64),
) -> f64 {
    let mut l: Vec<DMatrix<f64>> = match rng {
        None => pb.dims.iter().map(|&d| DMatrix::identity(d, d)).collect(),
        Some(r) => pb
            .dims
            .iter()
            .map(|&d| {
                DMatrix::from_fn(d, d, |i, j| match i.cmp(&j) {
                    std::cmp::Ordering::Less => 0.0,
                    std::cmp::Ordering::Equal => r.gen_range(-0.5f64..0.5).exp(),
                    std::cmp::Ordering::Greater => r.gen_range(-0.3..0.3),
                })
            })
            .collect(),
    };
    let to_m =
        |l: &[DMatrix<f64>]| -> Vec<DMatrix<f64>> { l.iter().map(|x| x * x.transpose()).collect() };
    let mut value = pb.log_ratio(&to_m(&l)).unwrap_or(f64::NEG_INFINITY);
    let mut step = 0.5;
    for it in 0..iters {
        let m = to_m(&l);
        let k = pb.aggregate(&m);
        let (Some(kinv), true) = (k.clone().try_inverse(), value.is_finite()) else {
            on_iter(it, value);
            continue;
        };
        let grads: Vec<DMatrix<f64>> = (0..l.len())
            .map(|j| {
                let Some(minv) = m[j].clone().try_inverse() else {
                    return DMatrix::zeros(pb.dims[j], pb.dims[j]);
                };
                let g = (minv - &pb.maps[j] * &kinv * pb.maps[j].transpose()) * (pb.p[j] / 2.0);
                (g * &l[j] * 2.0).lower_triangle()
            })
            .collect();
        let g2 = frob2(&grads);
        if g2 < 1e-24 {
            on_iter(it, value);
            continue;
        }
        let mut accepted = false;
        for _ in 0..50 {
            let nl: Vec<DMatrix<f64>> = l.iter().zip(&grads).map(|(x, g)| x + g * step).collect();
            if let Some(nv) = pb.log_ratio(&to_m(&nl)) {
                if nv >= value + ARMIJO * step * g2 {
                    l = nl;
                    value = nv;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if accepted {
            step = (step * 2.0).min(1e3);
        } else {
            step = 0.5;
        }
        on_iter(it, value);
    }
    value
}

/// Two lower bounds for the BL constant: `1/F` from Lieb's variational
/// formula and the best Gaussian ratio. Restart 0 starts at the identity,
/// the others at seeded random points.
/// `(minor^{-1} pi, det minor)` for a `k x k` column minor of `pi` such that
/// every entry of `minor^{-1} pi` is at most 1 in absolute value. Entry
/// `(i, j)` is the factor by which swapping pivot `i` for column `j` scales
/// the minor's determinant, so swapping while some entry exceeds 1 strictly
/// increases `|det|` and terminates.
fn dominant_form(pi: &Mat) -> Result<(Mat, Rat), BLError> {
    let (_, mut pivots) = pi.rref();
    let one = Rat::one();
    loop {
        let minor = pi.select_columns(&pivots);
        let r = &minor.inverse()? * pi;
        let swap = (0..r.nrows())
            .flat_map(|i| (0..r.ncols()).map(move |j| (i, j)))
            .find(|&(i, j)| r[(i, j)].abs() > one);
        match swap {
            Some((i, j)) => pivots[i] = j,
            None => return Ok((r, minor.determinant()?)),
        }
    }
}

pub fn estimate_bl_constant(d: &BLDatum, options: EstimateOptions) -> Result<BLEstimate, BLError> {
    if !d.scaling_ok() {
        return Err(BLError::Scaling);
    }
    let pb = Problem::new(d)?;
    let restarts = options.restarts.max(1);
    let per = (options.budget / restarts).max(1);
    let total = per * restarts;
    let stride = (total / 50).max(1);

    let mut var_curve = vec![f64::INFINITY; total];
    let mut gauss_curve = vec![f64::NEG_INFINITY; total];
    for r in 0..restarts {
        let base = r * per;
        let mut rng = seed::rng(seed::derive(options.seed, r as u64));
        let rng_opt = (r > 0).then_some(&mut rng);
        run_variational(&pb, per, rng_opt, |it, f| var_curve[base + it] = f);
        let mut rng = seed::rng(seed::derive(options.seed, (restarts + r) as u64));
        let rng_opt = (r > 0).then_some(&mut rng);
        run_gaussian(&pb, per, rng_opt, |it, v| gauss_curve[base + it] = v);
    }
    // Best-so-far, so both reported curves are monotone.
    for i in 1..total {
        var_curve[i] = var_curve[i].min(var_curve[i - 1]);
        gauss_curve[i] = gauss_curve[i].max(gauss_curve[i - 1]);
    }
    let best_log_f = var_curve[total - 1];
    let best_log_r = gauss_curve[total - 1];
    let shift = pb.log_shift;
    let var_bound = (shift - best_log_f).exp();
    let gauss_bound = (shift + best_log_r).exp();
    let trace: Vec<TracePoint> = (0..total)
        .filter(|i| (i + 1) % stride == 0 || i + 1 == total)
        .map(|i| TracePoint {
            iteration: i + 1,
            variational: (shift - var_curve[i]).exp(),
            gaussian: (shift + gauss_curve[i]).exp(),
        })
        .collect();
    let tail_start = total - (total / 10).max(1);
    let converged = (tail_start..total).all(|i| {
        let v = (shift - var_curve[i]).exp();
        let g = (shift + gauss_curve[i]).exp();
        v.is_finite() && g.is_finite() && (v - g).abs() <= 1e-3 * v.max(g)
    });
    let min_f = best_log_f.exp();
    Ok(BLEstimate {
        lower_bound_variational: var_bound,
        lower_bound_gaussian: gauss_bound,
        iterations: 2 * total,
        converged,
        bl_infinite: min_f < INFINITE_THRESHOLD,
        min_f,
        trace,
    })
}

/// `det(sum p_j pi_j^T M_j pi_j)^{-1/2} prod det(M_j)^{p_j/2}`.
pub fn gaussian_ratio(d: &BLDatum, m_list: &[DMatrix<f64>]) -> Result<f64, BLError> {
    if m_list.len() != d.maps.len() {
        return Err(BLError::InvalidDatum("one matrix per map required".into()));
    }
    let pb = Problem {
        n: d.n,
        maps: d.maps.iter().map(|m| m.matrix.clone()).collect(),
        dims: d.maps.iter().map(|m| m.nj).collect(),
        p: d.exponents_f64(),
        log_shift: 0.0,
    };
    for (m, &nj) in m_list.iter().zip(&pb.dims) {
        if m.nrows() != nj || m.ncols() != nj || Cholesky::new(m.clone()).is_none() {
            return Err(BLError::NotPositiveDefinite);
        }
    }
    pb.log_ratio(m_list)
        .map(f64::exp)
        .ok_or(BLError::SingularForm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bl::BLMap;
    use crate::linalg::{int, rat, Mat};

    fn holder() -> BLDatum {
        BLDatum::holder(3, vec![rat(1, 2), rat(1, 2)]).unwrap()
    }

    fn ids(d: &BLDatum) -> Vec<DMatrix<f64>> {
        d.maps
            .iter()
            .map(|m| DMatrix::identity(m.nj, m.nj))
            .collect()
    }

    #[test]
    fn ratio_at_identity() {
        let h = holder();
        assert!((gaussian_ratio(&h, &ids(&h)).unwrap() - 1.0).abs() < 1e-12);
        let lw = BLDatum::loomis_whitney(3).unwrap();
        assert!((gaussian_ratio(&lw, &ids(&lw)).unwrap() - 1.0).abs() < 1e-12);
        let scaled: Vec<DMatrix<f64>> = ids(&h).into_iter().map(|m| m * 7.5).collect();
        assert!((gaussian_ratio(&h, &scaled).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_errors() {
        let h = holder();
        let neg = vec![-DMatrix::identity(3, 3), DMatrix::identity(3, 3)];
        assert_eq!(gaussian_ratio(&h, &neg), Err(BLError::NotPositiveDefinite));
        let pi = Mat::from_ints(&[vec![1, 0]]);
        let d = BLDatum::new(2, vec![BLMap::from_exact(pi)], vec![int(2)]).unwrap();
        assert_eq!(
            gaussian_ratio(&d, &[DMatrix::identity(1, 1)]),
            Err(BLError::SingularForm)
        );
    }

    #[test]
    fn known_constants() {
        for d in [holder(), BLDatum::loomis_whitney(3).unwrap()] {
            let e = estimate_bl_constant(&d, EstimateOptions::new(400, 1)).unwrap();
            assert!((e.lower_bound_variational - 1.0).abs() < 1e-3, "{e:?}");
            assert!((e.lower_bound_gaussian - 1.0).abs() < 1e-3, "{e:?}");
            assert!(e.converged && !e.bl_infinite);
            for w in e.trace.windows(2) {
                assert!(w[1].variational >= w[0].variational);
                assert!(w[1].gaussian >= w[0].gaussian);
            }
        }
    }

    #[test]
    fn violated_datum_diverges() {
        let pi = Mat::from_ints(&[vec![1, 0]]);
        let d = BLDatum::new(2, vec![BLMap::from_exact(pi)], vec![int(2)]).unwrap();
        let e = estimate_bl_constant(&d, EstimateOptions::new(400, 2)).unwrap();
        assert!(e.bl_infinite, "{e:?}");
    }

    #[test]
    fn deterministic() {
        let d = BLDatum::loomis_whitney(3).unwrap();
        let a = estimate_bl_constant(&d, EstimateOptions::new(80, 5)).unwrap();
        let b = estimate_bl_constant(&d, EstimateOptions::new(80, 5)).unwrap();
        assert_eq!(a, b);
        let bad = BLDatum::holder(2, vec![rat(1, 3), rat(1, 3)]).unwrap();
        assert_eq!(
            estimate_bl_constant(&bad, EstimateOptions::new(8, 0)),
            Err(BLError::Scaling)
        );
    }
}
