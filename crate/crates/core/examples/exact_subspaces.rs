//! Exact subspace calculus over Q: sums, intersections, kernels, complements.

use equilab::linalg::{
    int, kernel_basis, orthogonal_complement, orthogonal_projector, rat, subspace_intersect,
    subspace_sum, Mat, Subspace,
};

fn main() {
    let plane = Subspace::from_vectors(
        4,
        &[
            vec![int(1), int(0), int(1), int(0)],
            vec![int(0), int(1), int(0), int(1)],
        ],
    );
    let coords = Subspace::coordinate(4, &[0, 1]);
    let sum = subspace_sum(&plane, &coords).unwrap();
    let meet = subspace_intersect(&plane, &coords).unwrap();
    println!(
        "dim P = {}, dim E = {}, dim(P+E) = {}, dim(P∩E) = {}",
        plane.dim(),
        coords.dim(),
        sum.dim(),
        meet.dim()
    );

    let m = Mat::from_ints(&[vec![1, 2, 3], vec![2, 4, 6]]);
    let ker = kernel_basis(&m);
    println!("rank {} kernel dim {}", m.rank(), ker.dim());

    let line = Subspace::from_vectors(3, &[vec![rat(1, 2), int(1), int(0)]]);
    println!(
        "complement of the line has dim {}",
        orthogonal_complement(&line).dim()
    );
    println!(
        "projector onto the line:\n{}",
        serde_json::to_string_pretty(&orthogonal_projector(&line)).unwrap()
    );
    println!(
        "canonical basis as JSON: {}",
        serde_json::to_string(&line).unwrap()
    );
}
