//! Generated fractal sets, their dyadic and tube covering numbers, and the
//! Frostman constant with the energy bound it implies.

use equilab::discretized::{
    covering_number, frostman_constant, frostman_energy_bound_check, generate_fractal,
    tube_covering_number, TubeSpec,
};

fn main() {
    for desc in [
        "cantor:3:0,2:6",
        "cantor:3:0,2:4:2",
        "grid:5:2",
        "random:6:2:0.3",
        "weight_aligned:1,1,0.5,0,0",
    ] {
        let set = generate_fractal(&desc.parse().unwrap(), 1).unwrap();
        let counts: Vec<String> = (1..=6)
            .map(|s| covering_number(&set, s).unwrap().to_string())
            .collect();
        let slope = (covering_number(&set, 6).unwrap() as f64
            / covering_number(&set, 3).unwrap() as f64)
            .log2()
            / 3.0;
        println!(
            "{desc:<28} {} points, designed dim {:.3}, |F|_2^-s for s=1..6: {} (slope {slope:.3})",
            set.len(),
            set.designed_dim.unwrap_or(f64::NAN),
            counts.join(" ")
        );
    }

    let set = generate_fractal(&"weight_aligned:1,1,0.5,0,0".parse().unwrap(), 1).unwrap();
    let tube = TubeSpec {
        s: 6,
        r: vec![0.5, 1.0],
        level_dims: vec![2, 3],
    };
    println!(
        "tube covering (two coarse + three fine coordinates): {}",
        tube_covering_number(&set, &tube).unwrap()
    );

    let small = generate_fractal(&"cantor:3:0,2:5:2".parse().unwrap(), 0).unwrap();
    let c = frostman_constant(&small, 8, 1.0).unwrap();
    let ok = frostman_energy_bound_check(&small, 8, 1.0, 0.5).unwrap();
    println!(
        "Cantor dust: Frostman constant at alpha=1 is {c:.3}; energy bound at beta=1/2 holds: {ok}"
    );
}
