//! Brascamp-Lieb data from a representation: the kernel-lattice feasibility
//! test, and the same datum made infeasible by forcing a common kernel vector.

use equilab::bl::{build_datum_from_rep, check_feasibility, DatumMode, FeasibilityMode};
use equilab::generic_dim::sample_trials;
use equilab::linalg::int;
use equilab::rep::{build_config, flag_projector, weight_decompose};

fn main() {
    let cfg = build_config("so_pq:2,1".parse().unwrap()).unwrap();
    let dec = weight_decompose(&cfg).unwrap();
    let w = flag_projector(&dec, &int(2)).unwrap().flag;
    let elements = sample_trials(&cfg, cfg.n, 7)
        .unwrap()
        .into_iter()
        .map(|s| s.matrix)
        .collect();
    let datum = build_datum_from_rep(&cfg, &DatumMode::Subspace { w, elements }).unwrap();
    println!(
        "datum: n = {}, {} maps, exponent {}",
        datum.n,
        datum.maps.len(),
        datum.exponents[0]
    );

    let cert = check_feasibility(&datum, FeasibilityMode::Lattice).unwrap();
    println!(
        "lattice of {} subspaces, feasible: {}",
        cert.lattice_size,
        cert.is_feasible()
    );

    let v = vec![int(1), int(-1), int(0), int(2), int(1)];
    let stuffed = datum.stuff_kernel(&v).unwrap();
    let cert = check_feasibility(&stuffed, FeasibilityMode::Lattice).unwrap();
    println!(
        "after stuffing: feasible {}, witness {}",
        cert.is_feasible(),
        serde_json::to_string(&cert.witness()).unwrap()
    );

    println!(
        "datum JSON:\n{}",
        serde_json::to_string_pretty(&datum).unwrap()
    );
}
