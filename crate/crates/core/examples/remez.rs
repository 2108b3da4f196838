//! Sublevel sets of random polynomials against the Remez-type bound.

use equilab::discretized::{remez_check, Polynomial};

fn main() {
    for (vars, degree) in [(1, 1), (1, 4), (2, 2), (2, 4)] {
        for seed in 0..3 {
            let p = Polynomial::random(vars, degree, seed);
            let r = remez_check(&p, &vec![(-1.0, 1.0); vars], 0.05, 100_000, seed, None).unwrap();
            println!(
                "d={vars} deg={degree} seed={seed}: |{{|P| < 0.05}}| = {:.4}, bound {:.4}, sup {:.3} {}",
                r.empirical_measure,
                r.bound,
                r.sup_norm,
                if r.ok { "ok" } else { "VIOLATED" }
            );
        }
    }
}
