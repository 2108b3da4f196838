//! Small values of an irrational indefinite form on integer boxes, with exact
//! arithmetic in Q(sqrt 2), and a rational isotropic form for contrast.
//!
//!     cargo run --release --example oppenheim_decay -- "x1^2+x2^2-sqrt2*x3^2" 10,30,100,300

use equilab::linalg::int;
use equilab::oppenheim::{decay_curve, search_min_value, Kappa, QuadraticForm};

fn main() {
    let mut args = std::env::args().skip(1);
    let form: QuadraticForm = args
        .next()
        .unwrap_or_else(|| "x1^2+x2^2-sqrt2*x3^2".into())
        .parse()
        .expect("form");
    let ts: Vec<i64> = args
        .next()
        .unwrap_or_else(|| "10,30,100,300".into())
        .split(',')
        .map(|t| t.parse().expect("box radius"))
        .collect();
    println!("Q = {form}, signature {:?}", form.signature());
    let curve = decay_curve(&form, &int(0), &ts).unwrap();
    for r in &curve.rows {
        println!(
            "  T = {:>5}: min |Q(v)| = {:.6e} at {:?}",
            r.t_bound, r.best_value, r.best_v
        );
    }
    match curve.kappa {
        Kappa::Fitted { value } => println!("fitted decay exponent kappa = {value:.3}"),
        other => println!("decay exponent: {other:?}"),
    }

    let control: QuadraticForm = "x1^2-x3^2".parse().unwrap();
    let hit = search_min_value(&control, &int(0), 5).unwrap();
    println!(
        "{control}: minimum {} at {:?}, exact zero: {}",
        hit.best_value,
        hit.best_v,
        hit.is_exact_hit()
    );
}
