//! Shared fixtures for the pipeline benchmarks.

use flowmat_core::graph::Multigraph;
use flowmat_core::lattice::GramMatrix;

/// Gram matrix of the 5-vertex, 7-edge three-triangle graph (rank 3).
pub fn rhombic_gram() -> GramMatrix {
    GramMatrix::from_ints(&[vec![3, 1, 2], vec![1, 3, 0], vec![2, 0, 4]]).unwrap()
}

/// Gram matrix of the two-triangle graph (rank 2, hexagonal cell).
pub fn hexagon_gram() -> GramMatrix {
    GramMatrix::from_ints(&[vec![3, -1], vec![-1, 3]]).unwrap()
}

/// The densest corpus fixture: two vertices joined by eight parallel edges
/// (genus 7, 254 cell vertices).
pub fn parallel_bank(edges: usize) -> Multigraph {
    Multigraph::new(2, vec![(0, 1); edges])
}

/// The three-triangle graph itself, for the oracle benchmarks.
pub fn three_triangles() -> Multigraph {
    Multigraph::new(
        5,
        vec![(0, 4), (4, 1), (2, 0), (1, 2), (3, 0), (1, 3), (0, 1)],
    )
}
