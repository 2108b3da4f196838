//! Weight decomposition, flags and the irreducibility/proximality checks for
//! each built-in configuration.

use equilab::linalg::format_rat;
use equilab::rep::{
    build_config, check_irreducible, check_proximal, flag_projector, weight_decompose,
};

fn main() {
    let names = [
        "so_pq:2,1",
        "so_pq:2,2",
        "sp2n:2",
        "tensor:2,2",
        "tensor_std:2,2",
        "sl2_sym:4",
        "diagonal:sl3",
    ];
    for name in names {
        let cfg = build_config(name.parse().unwrap()).unwrap();
        let dec = weight_decompose(&cfg).unwrap();
        let weights: Vec<String> = dec
            .eigenvalues
            .iter()
            .zip(&dec.multiplicities)
            .map(|(w, m)| format!("{}^{m}", format_rat(w)))
            .collect();
        let flags: Vec<String> = dec
            .eigenvalues
            .iter()
            .map(|mu| format!("{}", flag_projector(&dec, mu).unwrap().flag.dim()))
            .collect();
        println!(
            "{name:<15} n={:<2} weights [{}] flag dims [{}] {} proximal={}",
            cfg.n,
            weights.join(" "),
            flags.join(" "),
            check_irreducible(&cfg).label(),
            check_proximal(&dec)
        );
    }
}
