//! Lower bounds on Brascamp-Lieb constants from the variational and Gaussian
//! optimizers, checked against direct quadrature.
//!
//!     cargo run --release --example bl_estimate -- 2000

use equilab::bl::{
    estimate_bl_constant, gaussian_ratio, quadrature_ratio, BLDatum, EstimateOptions,
};
use equilab::linalg::rat;
use nalgebra::DMatrix;

fn main() {
    let budget: usize = std::env::args()
        .nth(1)
        .map_or(2000, |b| b.parse().expect("budget"));
    let data = [
        (
            "Hölder n=3 p=(1/2,1/2)",
            BLDatum::holder(3, vec![rat(1, 2), rat(1, 2)]).unwrap(),
        ),
        (
            "Hölder n=2 p=(1/3,2/3)",
            BLDatum::holder(2, vec![rat(1, 3), rat(2, 3)]).unwrap(),
        ),
        ("Loomis-Whitney n=3", BLDatum::loomis_whitney(3).unwrap()),
    ];
    for (name, d) in &data {
        let e = estimate_bl_constant(d, EstimateOptions::new(budget, 1)).unwrap();
        println!(
            "{name}: variational >= {:.6}, gaussian >= {:.6}, converged {}, min F {:.3e}",
            e.lower_bound_variational, e.lower_bound_gaussian, e.converged, e.min_f
        );
        let ms: Vec<DMatrix<f64>> = d
            .maps
            .iter()
            .enumerate()
            .map(|(j, m)| {
                DMatrix::from_fn(
                    m.nj,
                    m.nj,
                    |r, c| if r == c { 1.0 + 0.3 * j as f64 } else { 0.1 },
                )
            })
            .collect();
        let closed = gaussian_ratio(d, &ms).unwrap();
        let quad = quadrature_ratio(d, &ms, 6.0, if d.n == 3 { 61 } else { 201 }).unwrap();
        println!("  gaussian input ratio: closed form {closed:.9}, quadrature {quad:.9}");
    }
}
