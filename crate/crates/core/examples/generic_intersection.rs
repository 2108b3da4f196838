//! Monte Carlo check of dim(hW ∩ W') <= dim W dim W' / n over generic h,
//! the projection counterpart, spanning tuples and a tree of operations.
//!
//!     cargo run --example generic_intersection -- so_pq:2,1 100

use equilab::generic_dim::{
    check_intersection_bound, check_projection_bound, find_spanning_q, generic_tree_dim,
    weight_flag_family, TreeOp, TreeOpKind,
};
use equilab::rep::{build_config, weight_decompose};

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "so_pq:2,1".into());
    let trials: usize = args.next().map_or(50, |t| t.parse().expect("trial count"));
    let cfg = build_config(name.parse().expect("config descriptor")).unwrap();
    let family = weight_flag_family(&weight_decompose(&cfg).unwrap());

    println!(
        "{name}: n = {}, {} flags, {trials} trials per pair",
        cfg.n,
        family.len()
    );
    for (sw, w) in &family {
        for (swp, wp) in &family {
            let r = check_intersection_bound(&cfg, w, wp, trials, 1).unwrap();
            let p = check_projection_bound(&cfg, w, wp, trials, 2).unwrap();
            println!(
                "  {sw:>8} x {swp:<8} k={} k'={} intersection {:?} ({}/{}) projection {:?} ({}/{})",
                w.dim(),
                wp.dim(),
                r.dimension_histogram,
                r.passes,
                r.trials,
                p.dimension_histogram,
                p.passes,
                p.trials
            );
        }
        if !w.is_full() {
            let s = find_spanning_q(&cfg, w, 10, 3).unwrap();
            println!("  {sw}: spanning q = {}, k_list = {:?}", s.q, s.k_list);
        }
    }

    let (_, w) = family.last().unwrap();
    let tree = TreeOp::node(
        TreeOpKind::Intersect,
        vec![TreeOp::star(TreeOpKind::Sum, 2).unwrap(), TreeOp::Leaf(2)],
    )
    .unwrap();
    let (dim, _) = generic_tree_dim(&cfg, &tree, w, 20, 4).unwrap();
    println!("(hW + h'W) ∩ h''W for the top flag: generic dim {dim:?}");
}
