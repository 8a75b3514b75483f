//! Cross-checks between the lattice pipeline and the graph oracle on named
//! fixtures, including the loop fixtures kept out of the golden corpus.

use flowmat_core::graph::{
    all_circuits, fundamental_basis, graphic_matroid, spanning_tree_count,
    strong_orientation_count, two_cut_blocks, Multigraph,
};
use flowmat_core::lattice::{strict_voronoi_vectors, GramMatrix, LatticeVector};
use flowmat_core::matroid::{blocks_isomorphic, expand, is_isomorphic};
use flowmat_core::reconstruct::{
    choose_basis, classify_pair, reconstruct, solve_block_sizes, spanning_tree_basis,
    PairType,
};
use flowmat_core::voronoi::build_cell;
use flowmat_core::{Int, Rat};

fn three_triangles() -> Multigraph {
    Multigraph::new(
        5,
        vec![(0, 4), (4, 1), (2, 0), (1, 2), (3, 0), (1, 3), (0, 1)],
    )
}

fn two_triangles_shared_edge() -> Multigraph {
    Multigraph::new(4, vec![(0, 1), (1, 2), (0, 3), (3, 2), (2, 0)])
}

fn theta() -> Multigraph {
    Multigraph::new(2, vec![(0, 1), (0, 1), (0, 1)])
}

fn k4() -> Multigraph {
    Multigraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
}

fn round_trip(g: &Multigraph) {
    let basis = fundamental_basis(g);
    let m = reconstruct(&basis.gram).expect("flow lattice reconstructs");
    let oracle = graphic_matroid(g);
    assert!(is_isomorphic(&expand(&m), &oracle).unwrap());
    let mut got = m.block_sizes().to_vec();
    got.sort_unstable();
    let mut want = two_cut_blocks(g).sizes();
    want.sort_unstable();
    assert_eq!(got, want);
}

#[test]
fn loop_fixtures_round_trip() {
    // figure eight: two loops at one vertex
    round_trip(&Multigraph::new(1, vec![(0, 0), (0, 0)]));
    // triangle with a loop
    round_trip(&Multigraph::new(3, vec![(0, 1), (1, 2), (2, 0), (1, 1)]));
    // theta with a loop on each hub
    round_trip(&Multigraph::new(
        2,
        vec![(0, 1), (0, 1), (0, 1), (0, 0), (1, 1)],
    ));
}

#[test]
fn loop_fixture_counts() {
    let g = Multigraph::new(3, vec![(0, 1), (1, 2), (2, 0), (1, 1)]);
    let basis = fundamental_basis(&g);
    let circuits = strict_voronoi_vectors(&basis.gram);
    assert_eq!(circuits.len(), all_circuits(&g).len());
    let cell = build_cell(&basis.gram, &circuits).unwrap();
    assert_eq!(
        cell.vertices().len() as u64,
        strong_orientation_count(&g).unwrap()
    );
    assert_eq!(
        basis.gram.to_matq().det(),
        Rat::from_integer(spanning_tree_count(&g))
    );
}

/// Two 4-cycles through the same pair of rungs with opposite senses cannot be
/// compatibly oriented; their four facets are pairwise vertex-disjoint.
#[test]
fn incompatible_pair_is_detected() {
    let g = Multigraph::new(4, vec![(0, 1), (2, 3), (1, 2), (3, 0), (1, 3), (2, 0)]);
    let basis = fundamental_basis(&g);
    let circuits = strict_voronoi_vectors(&basis.gram);
    let cell = build_cell(&basis.gram, &circuits).unwrap();

    // C1 walks 0->1->2->3->0, C2 walks 0->1->3->2->0; they share the two rungs
    // with opposite relative orientation
    let c1_signed = vec![1i64, 1, 1, 1, 0, 0];
    let c2_signed = vec![1i64, -1, 0, 0, 1, 1];
    let toward = |signed: &[i64]| {
        let coords: Vec<Int> = basis
            .nontree_edges
            .iter()
            .map(|&e| Int::from(signed[e]))
            .collect();
        LatticeVector::new(coords).canonical_sign()
    };
    let find = |v: &LatticeVector| {
        circuits
            .iter()
            .position(|c| c.rep() == v)
            .expect("graph circuit appears as a strict Voronoi vector")
    };
    let i = find(&toward(&c1_signed));
    let j = find(&toward(&c2_signed));
    assert_eq!(classify_pair(&cell, i, j), PairType::Incompatible);

    // the pairing underestimates the intersection for this pair
    let vi = circuits[i].rep();
    let vj = circuits[j].rep();
    let pairing = basis.gram.inner(vi, vj).unwrap();
    assert_eq!(pairing, Int::from(0));
    let shared = c1_signed
        .iter()
        .zip(&c2_signed)
        .filter(|(a, b)| **a != 0 && **b != 0)
        .count();
    assert_eq!(shared, 2);
}

/// The chosen basis is cancellation-free: for each pair the oracle confirms
/// `|C_i ∩ C_j| = |(C_i, C_j)|`.
#[test]
fn chosen_basis_is_cancellation_free() {
    for g in [
        three_triangles(),
        two_triangles_shared_edge(),
        theta(),
        k4(),
    ] {
        let fb = fundamental_basis(&g);
        let circuits = strict_voronoi_vectors(&fb.gram);
        let cell = build_cell(&fb.gram, &circuits).unwrap();
        let basis = choose_basis(&cell).unwrap();
        // match each basis member to the oracle circuit with the same coords
        let oracle = all_circuits(&g);
        let members: Vec<&flowmat_core::graph::GraphCircuit> = basis
            .members
            .iter()
            .map(|&k| {
                let rep = &cell.halfspaces()[cell.facet_of_circuit(k)].normal;
                oracle
                    .iter()
                    .find(|c| &fb.coords_of(c).canonical_sign() == rep)
                    .expect("basis circuit exists in the graph")
            })
            .collect();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                let shared = members[i]
                    .edges
                    .intersection(&members[j].edges)
                    .count();
                let vi = &cell.halfspaces()[cell.facet_of_circuit(basis.members[i])].normal;
                let vj = &cell.halfspaces()[cell.facet_of_circuit(basis.members[j])].normal;
                let pairing = fb.gram.inner(vi, vj).unwrap();
                let pairing_abs = if pairing < Int::from(0) { -pairing } else { pairing };
                assert_eq!(Int::from(shared as i64), pairing_abs);
                assert_ne!(basis.pair_types[i][j], PairType::Incompatible);
            }
        }
    }
}

/// The greedy basis really is a spanning-tree basis: marked blocks count the
/// genus, each basis circuit holds exactly one marked block, and deleting one
/// edge per marked block leaves a spanning tree.
#[test]
fn greedy_basis_is_a_spanning_tree_basis() {
    for g in [
        three_triangles(),
        two_triangles_shared_edge(),
        theta(),
        k4(),
    ] {
        let blocks = two_cut_blocks(&g);
        let circuits = all_circuits(&g);
        let incidence: Vec<Vec<bool>> = circuits
            .iter()
            .map(|c| {
                blocks
                    .blocks()
                    .iter()
                    .map(|b| b.iter().all(|e| c.edges.contains(e)))
                    .collect()
            })
            .collect();
        // circuits meet a block entirely or not at all
        for c in &circuits {
            for b in blocks.blocks() {
                let hit = b.iter().filter(|e| c.edges.contains(e)).count();
                assert!(hit == 0 || hit == b.len());
            }
        }
        let (basis_rows, marked) = spanning_tree_basis(&incidence);
        assert_eq!(basis_rows.len(), marked.len());
        assert_eq!(marked.len(), g.genus());
        for &row in &basis_rows {
            let hits = marked.iter().filter(|&&c| incidence[row][c]).count();
            assert_eq!(hits, 1);
        }
        // deleting the first edge of each marked block leaves a spanning tree
        let deleted: Vec<usize> = marked.iter().map(|&c| blocks.blocks()[c][0]).collect();
        let remaining: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(e, _)| !deleted.contains(e))
            .map(|(_, &pair)| pair)
            .collect();
        assert_eq!(remaining.len(), g.n_vertices() - 1);
        let tree = Multigraph::new(g.n_vertices(), remaining);
        assert_eq!(spanning_tree_count(&tree), Int::from(1));
    }
}

/// The reconstruction is invariant under a change of lattice basis: a
/// unimodular congruence of the Gram matrix yields an isomorphic matroid.
#[test]
fn basis_change_invariance() {
    let g = three_triangles();
    let gram = fundamental_basis(&g).gram;
    let r = gram.rank();
    // U = elementary transvection + swap, det = ±1
    let u: Vec<Vec<i64>> = vec![vec![1, 1, 0], vec![0, 1, 0], vec![1, 0, 1]];
    let mut transformed = vec![vec![Int::from(0); r]; r];
    #[allow(clippy::needless_range_loop)]
    for i in 0..r {
        for j in 0..r {
            let mut acc = Int::from(0);
            for a in 0..r {
                for b in 0..r {
                    acc += Int::from(u[a][i]) * gram.entry(a, b) * Int::from(u[b][j]);
                }
            }
            transformed[i][j] = acc;
        }
    }
    let gram2 = GramMatrix::new(transformed).unwrap();
    let m1 = reconstruct(&gram).unwrap();
    let m2 = reconstruct(&gram2).unwrap();
    assert!(blocks_isomorphic(&m1, &m2).unwrap());
    assert!(is_isomorphic(&expand(&m1), &graphic_matroid(&g)).unwrap());
    assert!(is_isomorphic(&expand(&m2), &graphic_matroid(&g)).unwrap());
}

/// A Whitney twist (re-gluing one triangle of H across its 2-vertex cut with
/// the attachment swapped) changes the graph but not the matroid.
#[test]
fn whitney_twist_preserves_the_matroid() {
    let h = two_triangles_shared_edge();
    let twisted = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (2, 0)]);
    let mh = graphic_matroid(&h);
    let mt = graphic_matroid(&twisted);
    assert!(is_isomorphic(&mh, &mt).unwrap());
    // equivalence-relation spot checks
    assert!(is_isomorphic(&mh, &mh).unwrap());
    assert!(is_isomorphic(&mt, &mh).unwrap());
    let permuted = mh.permuted(&[4, 2, 0, 1, 3]);
    assert!(is_isomorphic(&mh, &permuted).unwrap());
    assert!(is_isomorphic(&mt, &permuted).unwrap());
    // and both sides have the same flow lattice up to basis choice
    let m1 = reconstruct(&fundamental_basis(&h).gram).unwrap();
    let m2 = reconstruct(&fundamental_basis(&twisted).gram).unwrap();
    assert!(blocks_isomorphic(&m1, &m2).unwrap());
}

/// On a 3-connected graph every 2-cut block is a single edge, so the block
/// matroid needs no expansion: its ground set is the parallel classes and
/// its circuits read straight off the facet/class incidences.
#[test]
fn three_connected_blocks_are_singletons() {
    let g = k4();
    let m = reconstruct(&fundamental_basis(&g).gram).unwrap();
    assert!(m.block_sizes().iter().all(|&s| s == 1));
    assert_eq!(m.ground_size(), g.n_edges());
    let expanded = expand(&m);
    let direct: Vec<std::collections::BTreeSet<usize>> = m.circuits().to_vec();
    assert_eq!(expanded.circuits(), &direct[..]);
    assert!(is_isomorphic(&expanded, &graphic_matroid(&g)).unwrap());
}

/// The norm of each circuit vector equals the edge length of the
/// corresponding graph circuit.
#[test]
fn circuit_norms_count_edges() {
    for g in [
        three_triangles(),
        two_triangles_shared_edge(),
        theta(),
        k4(),
        Multigraph::new(3, vec![(0, 1), (1, 2), (2, 0), (1, 1)]),
    ] {
        let basis = fundamental_basis(&g);
        for c in all_circuits(&g) {
            let coords = basis.coords_of(&c);
            assert_eq!(
                basis.gram.inner(&coords, &coords).unwrap(),
                Int::from(c.edges.len() as i64)
            );
        }
    }
}

/// The hexagon block sizes pin down the negative-pairing equation: the pair
/// equation for (C1, C2) has right-hand side |-1| = 1.
#[test]
fn hexagon_solution_matches_oracle_blocks() {
    let g = two_triangles_shared_edge();
    let gram = GramMatrix::from_ints(&[vec![3, -1], vec![-1, 3]]).unwrap();
    let circuits = strict_voronoi_vectors(&gram);
    let cell = build_cell(&gram, &circuits).unwrap();
    let basis = choose_basis(&cell).unwrap();
    let solution = solve_block_sizes(&cell, &basis).unwrap();
    let mut sizes = solution.sizes.clone();
    sizes.sort_unstable();
    let mut oracle_sizes = two_cut_blocks(&g).sizes();
    oracle_sizes.sort_unstable();
    assert_eq!(sizes, oracle_sizes);
}
