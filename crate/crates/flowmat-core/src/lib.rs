//! Reconstruction of the graphic matroid of a 2-edge-connected graph from the
//! Gram matrix of its lattice of integer flows.
//!
//! The pipeline runs entirely in exact rational arithmetic:
//!
//! 1. [`lattice`] finds the circuit elements of the lattice as strict Voronoi
//!    vectors via coset-constrained short-vector enumeration,
//! 2. [`voronoi`] builds the Voronoi cell (facets, vertices, edges, parallel
//!    classes of edges) by double description,
//! 3. [`reconstruct`] chooses a cancellation-free circuit basis, solves for the
//!    2-cut block sizes and assembles the circuit-incidence matroid,
//! 4. [`graph`] provides the independent graph-side ground truth used to verify
//!    every stage, and [`matroid`] compares the two sides up to relabeling.

// indexed loops are the clearest notation for the matrix math in this crate
#![allow(clippy::needless_range_loop)]

pub mod corpus;
pub mod formats;
pub mod graph;
pub mod lattice;
pub mod linalg;
pub mod matroid;
pub mod reconstruct;
pub mod voronoi;

mod bitset;

pub use lattice::{CircuitVector, GramMatrix, LatticeVector, Parity};
pub use linalg::{Int, LinalgError, MatQ, Rat, VecQ};
pub use matroid::CircuitMatroid;
pub use reconstruct::{BlockMatroid, BlockSolution, PairType};
pub use voronoi::VoronoiCell;
