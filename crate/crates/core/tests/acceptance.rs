//! End-to-end acceptance run: one line per criterion, nonzero exit on any
//! failure. Expected values are recomputed here by direct brute force
//! rather than read back from the library.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use equilab::bl::{
    check_feasibility, estimate_bl_constant, quadrature_ratio, BLDatum, BLMap, EstimateOptions,
    FeasibilityMode,
};
use equilab::discretized::{
    covering_number, frostman_energy_bound_check, generate_fractal, projection_experiment,
    remez_check, PointSet, Polynomial, ProjectionMode, ProjectionParams,
};
use equilab::generic_dim::{
    duality_ranks, find_spanning_q, intersection_report, sample_trials, submodularity_check,
    weight_flag_family,
};
use equilab::harness::{bl_agreement_corpus, SuiteConfig};
use equilab::linalg::{int, rat, subspace_intersect, subspace_sum, Mat, Rat, Subspace};
use equilab::oppenheim::{decay_curve, search_min_value, QuadraticForm};
use equilab::rep::{
    build_config, check_irreducible, check_proximal, weight_decompose, IrreducibleVerdict,
    RepConfig,
};

type Outcome = Result<String, String>;

const CONFIGS: [&str; 6] = [
    "so_pq:2,1",
    "so_pq:2,2",
    "so_pq:3,1",
    "sp2n:2",
    "tensor:2,2",
    "sl2_sym:4",
];

fn cfg(name: &str) -> RepConfig {
    build_config(name.parse().unwrap()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    ensure(start.elapsed() <= limit, || {
        format!("took {:.1?}, limit {limit:?}", start.elapsed())
    })
}

fn hypotheses() -> Outcome {
    let start = Instant::now();
    for name in CONFIGS {
        let c = cfg(name);
        let irr = check_irreducible(&c);
        ensure(irr == IrreducibleVerdict::AbsolutelyIrreducible, || {
            format!("{name}: {}", irr.label())
        })?;
        // Proximal means the top eigenvalue of a is simple; read it off the
        // diagonal of the action directly.
        let diag: Vec<Rat> = (0..c.n).map(|i| c.a_action[(i, i)].clone()).collect();
        let top = diag.iter().max().unwrap();
        let expected = diag.iter().filter(|x| *x == top).count() == 1;
        if name.starts_with("so_pq") || name.starts_with("sp2n") {
            ensure(expected, || format!("{name}: top weight is not simple"))?;
        }
        let got = check_proximal(&weight_decompose(&c).unwrap());
        ensure(got == expected, || {
            format!("{name}: proximal {got}, diagonal says {expected}")
        })?;
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!(
        "6 configs irreducible, proximality as expected ({:.1?})",
        start.elapsed()
    ))
}

/// `dim(hW ∩ W') = k + k' - rank [h B_W | B_W']`.
fn intersection_dim_by_rank(h: &Mat, w: &Subspace, wp: &Subspace) -> usize {
    let stacked = (h * w.basis()).hstack(wp.basis()).unwrap();
    w.dim() + wp.dim() - stacked.rank()
}

fn generic_intersection() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for (ci, name) in CONFIGS.iter().enumerate() {
        let c = cfg(name);
        let family = weight_flag_family(&weight_decompose(&c).unwrap());
        let batch = sample_trials(&c, 200, 1000 + ci as u64).unwrap();
        for (sw, w) in &family {
            for (swp, wp) in &family {
                let r = intersection_report(&batch, w, wp).unwrap();
                ensure(
                    r.trials == 200 && r.passes == 200 && r.witness_failures.is_empty(),
                    || format!("{name} {sw} {swp}: {}/{} pass", r.passes, r.trials),
                )?;
                for row in r.rows.iter().step_by(10) {
                    let d = intersection_dim_by_rank(&batch[row.trial].matrix, w, wp);
                    ensure(d == row.dim && d * c.n <= w.dim() * wp.dim(), || {
                        format!(
                            "{name} {sw} {swp} trial {}: dim {} vs rank formula {d}",
                            row.trial, row.dim
                        )
                    })?;
                }
                pairs += 1;
            }
        }
    }
    // R^2 ⊗ e1 against e1 ⊗ R^2 in R^2 ⊗ R^2: always a line, with equality.
    let c = cfg("tensor_std:2,2");
    let w = Subspace::coordinate(4, &[2, 3]);
    let wp = Subspace::coordinate(4, &[1, 3]);
    let batch = sample_trials(&c, 200, 77).unwrap();
    let r = intersection_report(&batch, &w, &wp).unwrap();
    ensure(r.dimension_histogram.get(&1) == Some(&200), || {
        format!("tensor plane pair histogram {:?}", r.dimension_histogram)
    })?;
    for h in &batch {
        ensure(intersection_dim_by_rank(&h.matrix, &w, &wp) == 1, || {
            "plane pair rank check".into()
        })?;
    }
    within(Duration::from_secs(120), start)?;
    Ok(format!(
        "{pairs} flag pairs x 200 trials, 0 witnesses; plane pair dim 1 with equality ({:.1?})",
        start.elapsed()
    ))
}

fn spanning() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for name in CONFIGS.iter().chain(&["sl2_sym:2"]) {
        let c = cfg(name);
        for (i, (spec, w)) in weight_flag_family(&weight_decompose(&c).unwrap())
            .iter()
            .enumerate()
        {
            if w.is_full() {
                continue;
            }
            let r = find_spanning_q(&c, w, 10, 500 + i as u64)
                .map_err(|e| format!("{name} {spec}: {e}"))?;
            let k = w.dim();
            let total: usize = r.k_list.iter().sum();
            ensure(
                total + c.n == r.q * k && r.k_list.iter().all(|&x| x < k),
                || format!("{name} {spec}: q {} k_list {:?}", r.q, r.k_list),
            )?;
            count += 1;
        }
    }
    // A line in R^n needs n generic translates, each meeting the running
    // span trivially.
    let c = cfg("sl2_sym:2");
    let dec = weight_decompose(&c).unwrap();
    let top = equilab::rep::flag_projector(&dec, dec.max_eigenvalue())
        .unwrap()
        .flag;
    ensure(top.dim() == 1, || {
        "top flag of sl2_sym:2 is not a line".into()
    })?;
    let r = find_spanning_q(&c, &top, 10, 3).map_err(|e| e.to_string())?;
    ensure(r.q == c.n && r.k_list == vec![0; c.n - 1], || {
        format!("sl2_sym:2 top line: ({}, {:?})", r.q, r.k_list)
    })?;
    Ok(format!(
        "{count} (config, flag) pairs; sl2_sym:2 top line (3, (0, 0)) ({:.1?})",
        start.elapsed()
    ))
}

fn small_subspace(rng: &mut ChaCha8Rng, n: usize) -> Subspace {
    let count = rng.gen_range(1..=n);
    let vs: Vec<Vec<Rat>> = (0..count)
        .map(|_| (0..n).map(|_| int(rng.gen_range(-1..=1))).collect())
        .collect();
    Subspace::from_vectors(n, &vs)
}

fn dim_of_sum(a: &Subspace, b: &Subspace) -> usize {
    a.basis().hstack(b.basis()).unwrap().rank()
}

fn submodularity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut nontrivial = 0;
    for t in 0..1000 {
        let n = rng.gen_range(4..=6);
        let (wp, w1, w2) = (
            small_subspace(&mut rng, n),
            small_subspace(&mut rng, n),
            small_subspace(&mut rng, n),
        );
        ensure(submodularity_check(&wp, &w1, &w2).unwrap(), || {
            format!("triple {t}")
        })?;
        // Independent count via dim(A ∩ B) = dim A + dim B - dim(A + B).
        let meet = |a: &Subspace, b: &Subspace| a.dim() + b.dim() - dim_of_sum(a, b);
        let a = subspace_intersect(&wp, &w1).unwrap();
        let lhs = meet(&a, &w2) + meet(&wp, &subspace_sum(&w1, &w2).unwrap());
        let rhs = meet(&wp, &w1) + meet(&wp, &w2);
        ensure(lhs >= rhs, || format!("triple {t}: {lhs} < {rhs}"))?;
        if rhs > 0 {
            nontrivial += 1;
        }
    }
    Ok(format!(
        "1000/1000 triples ({nontrivial} with nonzero intersections)"
    ))
}

fn duality() -> Outcome {
    let configs: Vec<(RepConfig, Vec<Subspace>)> = CONFIGS
        .iter()
        .map(|name| {
            let c = cfg(name);
            let flags = weight_flag_family(&weight_decompose(&c).unwrap())
                .into_iter()
                .map(|(_, w)| w)
                .collect();
            (c, flags)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for t in 0..500 {
        let (c, flags) = &configs[t % configs.len()];
        let w = &flags[rng.gen_range(0..flags.len())];
        let wp = &flags[rng.gen_range(0..flags.len())];
        let h = &sample_trials(c, 1, 9000 + t as u64).unwrap()[0].matrix;
        let (left, right) = duality_ranks(h, w, wp);
        // Both ranks equal dim W' - dim(W' ∩ (h^T W)^perp) = rank(B_W^T h B_W').
        let direct = (&w.basis().transpose() * &(h * wp.basis())).rank();
        ensure(left == right && left == direct, || {
            format!("instance {t}: {left} vs {right}, direct {direct}")
        })?;
    }
    Ok("500/500 instances equal".into())
}

fn random_pd(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let b = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-0.5..=0.5));
    &b * b.transpose() + DMatrix::identity(n, n) * 0.5
}

/// Trapezoid rule for `∫ prod_j exp(-π p_j (A_j x)^T M_j (A_j x)) dx` over
/// `[-L, L]^n`, with the selected coordinates `A_j` given as index lists.
fn grid_integral(n: usize, l: f64, pts: usize, f: &dyn Fn(&[f64]) -> f64) -> f64 {
    let h = 2.0 * l / (pts - 1) as f64;
    let mut idx = vec![0usize; n];
    let mut x = vec![0.0; n];
    let mut total = 0.0;
    loop {
        let mut w = 1.0;
        for (k, &i) in idx.iter().enumerate() {
            x[k] = -l + i as f64 * h;
            if i == 0 || i == pts - 1 {
                w *= 0.5;
            }
        }
        total += w * f(&x);
        let mut k = 0;
        loop {
            if k == n {
                return total * h.powi(n as i32);
            }
            idx[k] += 1;
            if idx[k] < pts {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn gauss(m: &DMatrix<f64>, y: &[f64]) -> f64 {
    let v = nalgebra::DVector::from_column_slice(y);
    (-std::f64::consts::PI * (v.transpose() * m * &v)[(0, 0)]).exp()
}

/// LHS/RHS of the Brascamp-Lieb inequality for coordinate-selection maps.
fn coordinate_ratio(n: usize, coords: &[Vec<usize>], p: &[f64], ms: &[DMatrix<f64>]) -> f64 {
    let (l, pts) = (6.0, 61);
    let lhs = grid_integral(n, l, pts, &|x| {
        coords
            .iter()
            .zip(p)
            .zip(ms)
            .map(|((c, pj), m)| {
                let y: Vec<f64> = c.iter().map(|&i| x[i]).collect();
                gauss(m, &y).powf(*pj)
            })
            .product()
    });
    let rhs: f64 = coords
        .iter()
        .zip(p)
        .zip(ms)
        .map(|((c, pj), m)| grid_integral(c.len(), l, pts, &|y| gauss(m, y)).powf(*pj))
        .product();
    lhs / rhs
}

fn bl_constants() -> Outcome {
    let start = Instant::now();
    let holder = BLDatum::holder(3, vec![rat(1, 2), rat(1, 2)]).unwrap();
    let lw = BLDatum::loomis_whitney(3).unwrap();
    let holder_coords = vec![vec![0, 1, 2], vec![0, 1, 2]];
    let lw_coords = vec![vec![1, 2], vec![0, 2], vec![0, 1]];
    let mut notes = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (name, d, coords) in [
        ("holder", &holder, &holder_coords),
        ("loomis-whitney", &lw, &lw_coords),
    ] {
        let e = estimate_bl_constant(d, EstimateOptions::new(2000, 1)).unwrap();
        ensure(
            e.lower_bound_variational >= 0.999 && e.lower_bound_gaussian >= 0.999,
            || {
                format!(
                    "{name}: {} / {}",
                    e.lower_bound_variational, e.lower_bound_gaussian
                )
            },
        )?;
        // The LW maps must drop one coordinate each, in this order.
        for (m, c) in d.maps.iter().zip(coords) {
            let e = m.exact.as_ref().unwrap();
            for (row, &col) in c.iter().enumerate() {
                ensure(e[(row, col)] == int(1), || {
                    format!("{name}: unexpected map layout")
                })?;
            }
        }
        let p = d.exponents_f64();
        let mut worst: f64 = 0.0;
        for _ in 0..4 {
            let ms: Vec<DMatrix<f64>> = coords
                .iter()
                .map(|c| random_pd(&mut rng, c.len()))
                .collect();
            let ours = coordinate_ratio(3, coords, &p, &ms);
            let lib = quadrature_ratio(d, &ms, 6.0, 61).unwrap();
            ensure((ours - lib).abs() < 1e-9, || {
                format!("{name}: quadrature {ours} vs library {lib}")
            })?;
            worst = worst.max(ours);
        }
        ensure(worst <= 1.0 + 1e-6, || {
            format!("{name}: quadrature ratio {worst}")
        })?;
        notes.push(format!(
            "{name} {:.5}/{:.5} max ratio {worst:.6}",
            e.lower_bound_variational, e.lower_bound_gaussian
        ));
    }
    // One map onto the first coordinate with p = 2 satisfies scaling (2 = 2 * 1)
    // but its kernel U = span(e2) has dim 1 > 2 * dim pi(U) = 0.
    let d = BLDatum::new(
        2,
        vec![BLMap::from_exact(Mat::from_ints(&[vec![1, 0]]))],
        vec![int(2)],
    )
    .unwrap();
    let cert = check_feasibility(&d, FeasibilityMode::Lattice).unwrap();
    let witness = cert.witness().ok_or("violated datum declared feasible")?;
    ensure(witness == &Subspace::coordinate(2, &[1]), || {
        format!("witness {witness:?}")
    })?;
    let e = estimate_bl_constant(&d, EstimateOptions::new(2000, 1)).unwrap();
    ensure(e.bl_infinite, || format!("optimizer min F {}", e.min_f))?;
    within(Duration::from_secs(60), start)?;
    Ok(format!(
        "{}; violated datum flagged by both ({:.1?})",
        notes.join("; "),
        start.elapsed()
    ))
}

fn agreement() -> Outcome {
    let start = Instant::now();
    let corpus =
        bl_agreement_corpus(SuiteConfig::default().master_seed).map_err(|e| e.to_string())?;
    ensure(
        corpus.len() == 20 && corpus.iter().filter(|c| c.2).count() == 10,
        || "corpus shape".into(),
    )?;
    let mut agree = 0;
    for (label, d, feasible) in &corpus {
        let cert =
            check_feasibility(d, FeasibilityMode::Lattice).map_err(|e| format!("{label}: {e}"))?;
        let est = estimate_bl_constant(d, EstimateOptions::new(2000, 11))
            .map_err(|e| format!("{label}: {e}"))?;
        if let Some(u) = cert.witness() {
            // dim U > sum p_j dim pi_j(U), recomputed from ranks.
            let rhs: Rat = d
                .maps
                .iter()
                .zip(&d.exponents)
                .map(|(m, p)| p * int((m.exact.as_ref().unwrap() * u.basis()).rank() as i64))
                .fold(Rat::zero(), |a, b| a + b);
            ensure(int(u.dim() as i64) > rhs, || {
                format!("{label}: witness does not violate")
            })?;
        }
        if cert.is_feasible() == *feasible && est.bl_infinite != *feasible {
            agree += 1;
        } else {
            eprintln!(
                "  {label}: constructed {feasible}, lattice {}, bl_infinite {}",
                cert.is_feasible(),
                est.bl_infinite
            );
        }
    }
    ensure(agree == 20, || format!("{agree}/20 agree"))?;
    Ok(format!("20/20 verdicts agree ({:.1?})", start.elapsed()))
}

/// Direct Frostman constant and energy bound, mirroring the definitions.
fn frostman_by_hand(f: &PointSet, s: u32, alpha: f64, beta: f64) -> bool {
    let dist = |x: &[f64], y: &[f64]| {
        x.iter()
            .zip(y)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt()
    };
    let total = f.len() as f64;
    let mut c: f64 = 1.0;
    for x in &f.points {
        for j in 0..=s {
            let r = 0.5f64.powi(j as i32);
            let inside = f.points.iter().filter(|y| dist(x, y) <= r).count() as f64;
            c = c.max(inside / total / r.powf(alpha));
        }
    }
    let delta = 0.5f64.powi(s as i32);
    let bound =
        2f64.powi(f.ambient as i32) * c * (1.0 + 1.0 / (1.0 - 2f64.powf(beta - alpha))) * total;
    f.points.iter().all(|w| {
        let g: f64 = f
            .points
            .iter()
            .filter(|y| y.as_slice() != w.as_slice())
            .map(|y| dist(y, w).max(delta).powf(-beta))
            .sum();
        g <= bound
    })
}

fn frostman() -> Outcome {
    let descs = [
        "random:5:2:0.3",
        "cantor:3:0,2:4:2",
        "random:3:3:0.5",
        "cantor:4:0,1,3:2:2",
        "cantor:3:0,2:5",
    ];
    let mut checked = 0;
    for i in 0..50 {
        let desc = descs[i % descs.len()];
        let f = generate_fractal(&desc.parse().unwrap(), 300 + i as u64).unwrap();
        for (alpha, beta) in [(1.0, 0.5), (2.5, 2.0)] {
            let lib = frostman_energy_bound_check(&f, 8, alpha, beta).unwrap();
            let ours = frostman_by_hand(&f, 8, alpha, beta);
            ensure(lib && ours, || {
                format!("set {i} ({desc}) at ({alpha}, {beta}): library {lib}, direct {ours}")
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "50 sets x 2 exponent pairs, {checked}/{checked} hold"
    ))
}

fn projection() -> Outcome {
    let start = Instant::now();
    let c = cfg("so_pq:2,1");
    let eps = 0.05;
    let s = 10;
    let target = 0.5f64.powf(s as f64 * eps);
    let fractal = "weight_aligned:1,1,0.5,0,0".parse().unwrap();
    let params = |m: f64, num_u, seed| ProjectionParams {
        mu: int(0),
        s,
        epsilon: eps,
        m_exponent: m,
        num_u,
        seed,
        mode: ProjectionMode::Subcritical,
    };
    // Pilot: the smallest integer M whose exceptional fraction on 50 sampled
    // u is at most half the target. The harness default must match it.
    let pilot_set = generate_fractal(&fractal, 1001).unwrap();
    let m = (1..=4)
        .map(f64::from)
        .find(|&m| {
            let r = projection_experiment(&c, &pilot_set, &params(m, 50, 1001)).unwrap();
            r.exceptional_fraction <= target / 2.0
        })
        .ok_or("no M in 1..=4 passes the pilot")?;
    let frozen = SuiteConfig::default().discretized.projection.m_exponent;
    ensure(m == frozen, || {
        format!("pilot gives M = {m}, harness uses {frozen}")
    })?;

    let set = generate_fractal(&fractal, 3).unwrap();
    let r = projection_experiment(&c, &set, &params(m, 200, 3)).unwrap();
    // Recount the exceptional fraction from the rows.
    let exc = r
        .per_u
        .iter()
        .filter(|u| (u.covering as f64) < r.covering_threshold)
        .count();
    ensure(
        exc == r.exceptional_count && (r.threshold - target).abs() < 1e-12,
        || "report inconsistent".into(),
    )?;
    ensure(r.exceptional_fraction <= target, || {
        format!(
            "exceptional fraction {} > {target:.3}",
            r.exceptional_fraction
        )
    })?;

    let grid = generate_fractal(&"grid:4:5".parse().unwrap(), 0).unwrap();
    ensure(covering_number(&grid, 4).unwrap() == 1 << 20, || {
        "control grid is not full".into()
    })?;
    let control = projection_experiment(
        &c,
        &grid,
        &ProjectionParams {
            s: 4,
            ..params(m, 200, 4)
        },
    )
    .unwrap();
    ensure(control.exceptional_fraction == 0.0, || {
        format!(
            "control exceptional fraction {}",
            control.exceptional_fraction
        )
    })?;
    within(Duration::from_secs(300), start)?;
    Ok(format!(
        "M = {m}; exceptional fraction {:.3} <= {target:.3}; control 0 ({:.1?})",
        r.exceptional_fraction,
        start.elapsed()
    ))
}

fn remez() -> Outcome {
    for t in 0..100u64 {
        let vars = 1 + (t % 2) as usize;
        let degree = 1 + (t / 2 % 4) as u32;
        let p = Polynomial::random(vars, degree, 700 + t);
        let r = remez_check(&p, &vec![(-1.0, 1.0); vars], 0.05, 100_000, t, None).unwrap();
        let bound = 4f64.powi((vars as u32 * degree) as i32)
            * (0.05 / r.sup_norm).powf(1.0 / (vars as f64 * degree as f64));
        ensure((r.bound - bound).abs() <= 1e-9 * bound, || {
            format!("poly {t}: bound {} vs {bound}", r.bound)
        })?;
        ensure(r.ok && r.empirical_measure <= bound, || {
            format!(
                "poly {t}: measure {} > bound {}",
                r.empirical_measure, r.bound
            )
        })?;
    }
    Ok("100/100 polynomials within bound".into())
}

/// Exact minimum of `|x^2 + y^2 - sqrt2 z^2|` over the box, as `(a, b)` with
/// value `|a - b sqrt2|`, found with integer arithmetic: among nonzero values
/// the comparison `|a - b√2| < |c - d√2|` is decided in floating point and
/// then confirmed exactly through the conjugate product.
fn brute_force(t: i64) -> (i64, i64) {
    let mut best: Option<(f64, i64, i64)> = None;
    for x in -t..=t {
        for y in -t..=t {
            for z in -t..=t {
                if x == 0 && y == 0 && z == 0 {
                    continue;
                }
                let (a, b) = (x * x + y * y, z * z);
                let v = (a as f64 - b as f64 * std::f64::consts::SQRT_2).abs();
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, a, b));
                }
            }
        }
    }
    let (_, a, b) = best.unwrap();
    (a, b)
}

fn oppenheim() -> Outcome {
    let start = Instant::now();
    let q: QuadraticForm = "x1^2+x2^2-sqrt2*x3^2".parse().unwrap();
    let curve = decay_curve(&q, &int(0), &[10, 100, 1000]).unwrap();
    let mut prev = f64::INFINITY;
    for r in &curve.rows {
        ensure(
            !r.value_exact.a.is_zero() || !r.value_exact.b.is_zero(),
            || format!("T = {}: exact zero", r.t_bound),
        )?;
        ensure(r.best_value <= prev, || {
            format!("T = {}: minimum increased", r.t_bound)
        })?;
        prev = r.best_value;
    }
    for (row, t) in curve.rows.iter().zip([10, 100]) {
        let (a, b) = brute_force(t);
        // Irrationality of sqrt2 makes a - b sqrt2 nonzero unless a = b = 0.
        ensure(a * a != 2 * b * b, || "brute force hit zero".into())?;
        let v =
            row.value_exact.a.to_f64().unwrap() + row.value_exact.b.to_f64().unwrap() * 2f64.sqrt();
        let oracle = (a as f64 - b as f64 * 2f64.sqrt()).abs();
        ensure((v.abs() - oracle).abs() < 1e-12, || {
            format!("T = {t}: search {v}, brute force {oracle}")
        })?;
    }
    let last = curve.rows.last().unwrap().best_value;
    ensure(last <= 0.05, || format!("final minimum {last}"))?;
    let control: QuadraticForm = "x1^2-x3^2".parse().unwrap();
    let hit = search_min_value(&control, &int(0), 10).unwrap();
    ensure(hit.is_exact_hit(), || {
        format!("control minimum {}", hit.best_value)
    })?;
    within(Duration::from_secs(120), start)?;
    let mins: Vec<String> = curve
        .rows
        .iter()
        .map(|r| format!("{:.5}", r.best_value))
        .collect();
    Ok(format!(
        "minima {} (brute force agrees at T = 10, 100); control 0 ({:.1?})",
        mins.join(" > "),
        start.elapsed()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("hypotheses", hypotheses),
        ("generic intersection bound", generic_intersection),
        ("spanning identity", spanning),
        ("submodularity", submodularity),
        ("projection duality", duality),
        ("BL constants", bl_constants),
        ("feasibility/optimizer agreement", agreement),
        ("Frostman to energy", frostman),
        ("subcritical projection experiment", projection),
        ("Remez", remez),
        ("Oppenheim small values", oppenheim),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg}", i + 1);
            }
        }
    }
    println!(
        "{}/{} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
