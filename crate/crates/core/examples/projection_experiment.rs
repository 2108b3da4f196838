//! Projections of a weight-aligned fractal through u.F for sampled unipotent
//! u, counting how often the projection is unexpectedly small.
//!
//!     cargo run --release --example projection_experiment -- 8 100

use equilab::discretized::{
    generate_fractal, projection_experiment, ProjectionMode, ProjectionParams,
};
use equilab::linalg::int;
use equilab::rep::build_config;

fn main() {
    let mut args = std::env::args().skip(1);
    let s: u32 = args
        .next()
        .map_or(8, |x| x.parse().expect("scale exponent"));
    let num_u: usize = args
        .next()
        .map_or(100, |x| x.parse().expect("sample count"));
    let cfg = build_config("so_pq:2,1".parse().unwrap()).unwrap();
    let set = generate_fractal(&"weight_aligned:1,1,0.5,0,0".parse().unwrap(), 3).unwrap();
    let params = ProjectionParams {
        mu: int(0),
        s,
        epsilon: 0.05,
        m_exponent: 1.0,
        num_u,
        seed: 3,
        mode: ProjectionMode::Subcritical,
    };
    let r = projection_experiment(&cfg, &set, &params).unwrap();
    println!(
        "delta = 2^-{s}: |F| = {}, threshold {:.1}, exceptional {}/{} = {:.3} (allowed {:.3}) -> {}",
        r.set_covering,
        r.covering_threshold,
        r.exceptional_count,
        r.num_u,
        r.exceptional_fraction,
        r.threshold,
        if r.passes { "pass" } else { "fail" }
    );
    let mut sizes: Vec<usize> = r.per_u.iter().map(|u| u.covering).collect();
    sizes.sort_unstable();
    println!(
        "projection sizes: min {} median {} max {}",
        sizes[0],
        sizes[sizes.len() / 2],
        sizes[sizes.len() - 1]
    );
}
