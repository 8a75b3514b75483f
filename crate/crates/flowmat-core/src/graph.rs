//! Graph-side ground truth, computed by direct brute force.
//!
//! This module is the oracle the lattice pipeline is verified against, so the
//! implementations favor being obviously correct over being fast: per-edge
//! deletion connectivity checks, pairwise 2-cut tests with an explicit
//! transitivity audit, and a full scan over all `2^m` orientations.

use crate::lattice::{GramMatrix, LatticeVector};
use crate::linalg::{Int, MatQ, Rat};
use crate::matroid::CircuitMatroid;
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph is not connected")]
    NotConnected,
    #[error("edge {0} is a bridge")]
    HasBridge(usize),
    #[error("graph too large for the brute-force orientation scan")]
    TooLarge,
}

/// Multigraph with ordered, oriented edges. Parallel edges and loops are
/// allowed; the orientation is the tail-to-head direction of each edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
}

/// A circuit of the graph: its edge set together with one of the two signed
/// flow vectors supported on it (+1 on edges traversed forward).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphCircuit {
    pub edges: BTreeSet<usize>,
    pub signed: Vec<i64>,
}

/// Partition of the edge set into 2-cut blocks: `e` and `f` are in the same
/// block iff `e = f` or deleting both disconnects the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCutBlocks {
    blocks: Vec<Vec<usize>>,
}

impl TwoCutBlocks {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, edge: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&edge))
            .expect("every edge belongs to a block")
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }
}

/// Deterministic spanning-tree data: the BFS tree, one fundamental circuit per
/// non-tree edge, and the Gram matrix of that circuit basis.
#[derive(Clone, Debug)]
pub struct FundamentalBasis {
    pub tree_edges: Vec<usize>,
    pub nontree_edges: Vec<usize>,
    pub circuits: Vec<GraphCircuit>,
    pub gram: GramMatrix,
}

impl FundamentalBasis {
    /// Coordinates of a circuit in this basis: the coefficient of each
    /// non-tree edge determines the flow.
    pub fn coords_of(&self, circuit: &GraphCircuit) -> LatticeVector {
        LatticeVector::new(
            self.nontree_edges
                .iter()
                .map(|&e| Int::from(circuit.signed[e]))
                .collect(),
        )
    }
}

impl Multigraph {
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize)>) -> Self {
        assert!(n_vertices > 0, "graph needs at least one vertex");
        assert!(
            edges.iter().all(|&(t, h)| t < n_vertices && h < n_vertices),
            "edge endpoint out of range"
        );
        Multigraph { n_vertices, edges }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Genus `|E| - |V| + 1` of a connected graph.
    pub fn genus(&self) -> usize {
        self.edges.len() + 1 - self.n_vertices
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for (ei, &(t, h)) in self.edges.iter().enumerate() {
            adj[t].push((ei, h));
            if t != h {
                adj[h].push((ei, t));
            }
        }
        adj
    }

    fn connected_without(&self, skip: &[usize]) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n_vertices];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for &(ei, w) in &adj[u] {
                if !skip.contains(&ei) && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Vertex partition into connected components.
    fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut comp = vec![usize::MAX; self.n_vertices];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for s in 0..self.n_vertices {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &(_, w) in &adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        queue.push_back(w);
                    }
                }
            }
            out.push(members);
        }
        out
    }
}

/// Checks that the graph is connected and bridge-free, finding bridges by
/// per-edge deletion.
pub fn validate_two_connected(g: &Multigraph) -> Result<(), GraphError> {
    if !g.connected_without(&[]) {
        return Err(GraphError::NotConnected);
    }
    for ei in 0..g.n_edges() {
        if !g.connected_without(&[ei]) {
            return Err(GraphError::HasBridge(ei));
        }
    }
    Ok(())
}

/// Partition of the edges into 2-cut blocks via pairwise deletion tests.
/// Transitivity of the relation is asserted rather than assumed.
pub fn two_cut_blocks(g: &Multigraph) -> TwoCutBlocks {
    let m = g.n_edges();
    let mut rel = vec![vec![false; m]; m];
    for e in 0..m {
        rel[e][e] = true;
        for f in e + 1..m {
            let cut = !g.connected_without(&[e, f]);
            rel[e][f] = cut;
            rel[f][e] = cut;
        }
    }
    // runtime audit: the relation must be an equivalence relation
    for e in 0..m {
        for f in 0..m {
            for h in 0..m {
                if rel[e][f] && rel[f][h] {
                    assert!(rel[e][h], "2-cut relation failed transitivity");
                }
            }
        }
    }
    let mut assigned = vec![false; m];
    let mut blocks = Vec::new();
    for e in 0..m {
        if assigned[e] {
            continue;
        }
        let block: Vec<usize> = (0..m).filter(|&f| rel[e][f]).collect();
        for &f in &block {
            assigned[f] = true;
        }
        blocks.push(block);
    }
    TwoCutBlocks { blocks }
}

/// Deterministic spanning tree (BFS scanning edges in index order) and the
/// fundamental circuit of each non-tree edge, with the Gram matrix of the
/// resulting circuit basis.
pub fn fundamental_basis(g: &Multigraph) -> FundamentalBasis {
    assert!(g.connected_without(&[]), "graph must be connected");
    let n = g.n_vertices();
    let adj = g.adjacency();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n]; // (edge, parent vertex)
    let mut depth = vec![0usize; n];
    let mut in_tree = vec![false; g.n_edges()];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &(ei, w) in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((ei, u));
                depth[w] = depth[u] + 1;
                in_tree[ei] = true;
                queue.push_back(w);
            }
        }
    }
    let tree_edges: Vec<usize> = (0..g.n_edges()).filter(|&e| in_tree[e]).collect();
    let nontree_edges: Vec<usize> = (0..g.n_edges()).filter(|&e| !in_tree[e]).collect();
    assert!(
        !nontree_edges.is_empty(),
        "graph has no independent cycles (genus 0)"
    );

    // signed tree step child -> parent
    let climb = |x: usize, signed: &mut Vec<i64>| -> usize {
        let (ei, p) = parent[x].expect("non-root vertex has a parent");
        let (t, _) = g.edges[ei];
        signed[ei] += if t == x { 1 } else { -1 };
        p
    };

    let circuits: Vec<GraphCircuit> = nontree_edges
        .iter()
        .map(|&ei| {
            let (t, h) = g.edges[ei];
            let mut signed = vec![0i64; g.n_edges()];
            signed[ei] = 1;
            if t != h {
                // close the circuit with the tree path from h back to t
                let (mut a, mut b) = (h, t); // walk a forward, b backward
                let mut down = vec![0i64; g.n_edges()];
                while depth[a] > depth[b] {
                    a = climb(a, &mut signed);
                }
                while depth[b] > depth[a] {
                    b = climb(b, &mut down);
                }
                while a != b {
                    a = climb(a, &mut signed);
                    b = climb(b, &mut down);
                }
                for (s, d) in signed.iter_mut().zip(&down) {
                    *s -= d;
                }
            }
            let edges = signed
                .iter()
                .enumerate()
                .filter(|(_, &s)| s != 0)
                .map(|(e, _)| e)
                .collect();
            let c = GraphCircuit { edges, signed };
            debug_assert!(is_flow(g, &c.signed));
            c
        })
        .collect();

    let gram = gram_of_circuits(&circuits).expect("fundamental basis Gram is positive definite");
    FundamentalBasis {
        tree_edges,
        nontree_edges,
        circuits,
        gram,
    }
}

/// Gram matrix of an explicit list of signed circuits under the Euclidean
/// pairing on the edge space.
pub fn gram_of_circuits(circuits: &[GraphCircuit]) -> Result<GramMatrix, crate::lattice::LatticeError> {
    let rows = circuits
        .iter()
        .map(|ci| {
            circuits
                .iter()
                .map(|cj| {
                    Int::from(
                        ci.signed
                            .iter()
                            .zip(&cj.signed)
                            .map(|(a, b)| a * b)
                            .sum::<i64>(),
                    )
                })
                .collect()
        })
        .collect();
    GramMatrix::new(rows)
}

fn is_flow(g: &Multigraph, signed: &[i64]) -> bool {
    let mut balance = vec![0i64; g.n_vertices()];
    for (ei, &(t, h)) in g.edges().iter().enumerate() {
        balance[h] += signed[ei];
        balance[t] -= signed[ei];
    }
    balance.iter().all(|&b| b == 0)
}

/// Every circuit of the graph (simple cycles, including single loops and
/// parallel-edge pairs), found by depth-first walk enumeration and
/// deduplicated up to reversal. Sorted by edge set.
pub fn all_circuits(g: &Multigraph) -> Vec<GraphCircuit> {
    let m = g.n_edges();
    // adjacency carrying edge ids and traversal direction; loops appear once
    let mut adj: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); g.n_vertices()];
    for (ei, &(t, h)) in g.edges().iter().enumerate() {
        adj[t].push((ei, h, 1));
        if t != h {
            adj[h].push((ei, t, -1));
        }
    }

    struct Dfs<'a> {
        adj: &'a [Vec<(usize, usize, i64)>],
        start: usize,
        used_edge: Vec<bool>,
        visited: Vec<bool>,
        path: Vec<(usize, i64)>,
        found: Vec<Vec<(usize, i64)>>,
    }

    impl Dfs<'_> {
        fn extend(&mut self, u: usize) {
            for &(ei, other, dir) in &self.adj[u] {
                if self.used_edge[ei] {
                    continue;
                }
                if other == self.start {
                    // each cycle closes twice (once per direction); keep the
                    // walk whose first edge id is below its last
                    if self.path.is_empty() || self.path[0].0 < ei {
                        let mut cycle = self.path.clone();
                        cycle.push((ei, dir));
                        self.found.push(cycle);
                    }
                } else if other > self.start && !self.visited[other] {
                    self.visited[other] = true;
                    self.used_edge[ei] = true;
                    self.path.push((ei, dir));
                    self.extend(other);
                    self.path.pop();
                    self.used_edge[ei] = false;
                    self.visited[other] = false;
                }
            }
        }
    }

    let mut circuits = Vec::new();
    for s in 0..g.n_vertices() {
        let mut dfs = Dfs {
            adj: &adj,
            start: s,
            used_edge: vec![false; m],
            visited: vec![false; g.n_vertices()],
            path: Vec::new(),
            found: Vec::new(),
        };
        dfs.visited[s] = true;
        dfs.extend(s);
        for cycle in dfs.found {
            let mut signed = vec![0i64; m];
            for &(ei, dir) in &cycle {
                signed[ei] = dir;
            }
            let edges: BTreeSet<usize> = cycle.iter().map(|&(ei, _)| ei).collect();
            // canonical orientation: +1 on the smallest edge
            let min_edge = *edges.iter().next().expect("cycle is nonempty");
            if signed[min_edge] < 0 {
                for s in &mut signed {
                    *s = -*s;
                }
            }
            let c = GraphCircuit { edges, signed };
            debug_assert!(is_flow(g, &c.signed));
            circuits.push(c);
        }
    }
    circuits.sort_by(|a, b| {
        let ka: Vec<usize> = a.edges.iter().copied().collect();
        let kb: Vec<usize> = b.edges.iter().copied().collect();
        ka.cmp(&kb)
    });
    circuits
}

/// The graphic matroid as circuit-incidence data: rows are circuits, columns
/// are edges.
pub fn graphic_matroid(g: &Multigraph) -> CircuitMatroid {
    let circuits = all_circuits(g).into_iter().map(|c| c.edges).collect();
    CircuitMatroid::new(g.n_edges(), circuits).expect("graph circuits form a valid matroid")
}

fn is_strong_orientation(g: &Multigraph, mask: u64, components: &[Vec<usize>]) -> bool {
    let n = g.n_vertices();
    let mut out_adj = vec![Vec::new(); n];
    let mut in_adj = vec![Vec::new(); n];
    for (ei, &(t, h)) in g.edges().iter().enumerate() {
        let (a, b) = if mask >> ei & 1 == 0 { (t, h) } else { (h, t) };
        out_adj[a].push(b);
        in_adj[b].push(a);
    }
    let reaches_all = |adj: &[Vec<usize>], root: usize, size: usize| {
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == size
    };
    components.iter().all(|comp| {
        let root = comp[0];
        reaches_all(&out_adj, root, comp.len()) && reaches_all(&in_adj, root, comp.len())
    })
}

/// Number of orientations making every component strongly connected, by a
/// scan over all `2^m` orientations.
pub fn strong_orientation_count(g: &Multigraph) -> Result<u64, GraphError> {
    strong_orientation_count_impl(g, false)
}

/// Parallel variant of [`strong_orientation_count`]; same result.
pub fn strong_orientation_count_par(g: &Multigraph) -> Result<u64, GraphError> {
    strong_orientation_count_impl(g, true)
}

fn strong_orientation_count_impl(g: &Multigraph, parallel: bool) -> Result<u64, GraphError> {
    if g.n_edges() > 20 {
        return Err(GraphError::TooLarge);
    }
    let components = g.components();
    let total = 1u64 << g.n_edges();
    let count = if parallel {
        (0..total)
            .into_par_iter()
            .filter(|&mask| is_strong_orientation(g, mask, &components))
            .count() as u64
    } else {
        (0..total)
            .filter(|&mask| is_strong_orientation(g, mask, &components))
            .count() as u64
    };
    Ok(count)
}

/// Number of spanning trees via the matrix-tree theorem (determinant of a
/// reduced Laplacian). Loops do not contribute.
pub fn spanning_tree_count(g: &Multigraph) -> Int {
    assert!(g.connected_without(&[]), "graph must be connected");
    let n = g.n_vertices();
    if n == 1 {
        return Int::from(1);
    }
    let mut lap = vec![vec![0i64; n]; n];
    for &(t, h) in g.edges() {
        if t == h {
            continue;
        }
        lap[t][t] += 1;
        lap[h][h] += 1;
        lap[t][h] -= 1;
        lap[h][t] -= 1;
    }
    let reduced = MatQ::from_fn(n - 1, n - 1, |i, j| Rat::from_integer(Int::from(lap[i + 1][j + 1])));
    let det = reduced.det();
    debug_assert!(det.denom() == &Int::from(1));
    det.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    pub(crate) fn triangle() -> Multigraph {
        Multigraph::new(3, vec![(0, 1), (1, 2), (2, 0)])
    }

    pub(crate) fn four_cycle() -> Multigraph {
        Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)])
    }

    /// 2 vertices joined by 3 parallel edges.
    pub(crate) fn theta() -> Multigraph {
        Multigraph::new(2, vec![(0, 1), (0, 1), (0, 1)])
    }

    /// The 5-vertex, 7-edge graph of three glued triangles, oriented so the
    /// explicit circuit basis below has Gram [[3,1,2],[1,3,0],[2,0,4]].
    pub(crate) fn three_triangles() -> Multigraph {
        Multigraph::new(
            5,
            vec![
                (0, 4), // e1
                (4, 1), // e2
                (2, 0), // e3
                (1, 2), // e4
                (3, 0), // e5
                (1, 3), // e6
                (0, 1), // e7
            ],
        )
    }

    /// Two triangles sharing one edge (graph H): 4 vertices, 5 edges.
    pub(crate) fn two_triangles_shared_edge() -> Multigraph {
        Multigraph::new(4, vec![(0, 1), (1, 2), (0, 3), (3, 2), (2, 0)])
    }

    fn circuit_from_signed(g: &Multigraph, signed: Vec<i64>) -> GraphCircuit {
        assert!(is_flow(g, &signed));
        GraphCircuit {
            edges: signed
                .iter()
                .enumerate()
                .filter(|(_, &s)| s != 0)
                .map(|(e, _)| e)
                .collect(),
            signed,
        }
    }

    #[test]
    fn two_connected_validation() {
        assert!(validate_two_connected(&triangle()).is_ok());
        let path = Multigraph::new(3, vec![(0, 1), (1, 2)]);
        assert!(matches!(
            validate_two_connected(&path).unwrap_err(),
            GraphError::HasBridge(_)
        ));
        let disconnected = Multigraph::new(4, vec![(0, 1), (0, 1), (2, 3), (2, 3)]);
        assert_eq!(
            validate_two_connected(&disconnected).unwrap_err(),
            GraphError::NotConnected
        );
        assert!(validate_two_connected(&three_triangles()).is_ok());
    }

    #[test]
    fn blocks_of_three_triangles() {
        // grouped by the original edge labels: {e1,e2}, {e3,e4}, {e5,e6}, {e7}
        let blocks = two_cut_blocks(&three_triangles());
        let sets: Vec<Vec<usize>> = blocks.blocks().to_vec();
        assert_eq!(sets, vec![vec![0, 1], vec![2, 3], vec![4, 5], vec![6]]);
    }

    #[test]
    fn blocks_of_triangle_and_k4() {
        let blocks = two_cut_blocks(&triangle());
        assert_eq!(blocks.blocks(), &[vec![0, 1, 2]]);
        let k4 = Multigraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(two_cut_blocks(&k4).len(), 6);
    }

    #[test]
    fn loop_is_a_singleton_block() {
        let mut edges = triangle().edges().to_vec();
        edges.push((1, 1));
        let g = Multigraph::new(3, edges);
        let blocks = two_cut_blocks(&g);
        assert_eq!(blocks.blocks(), &[vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn rhombic_gram_from_explicit_circuits() {
        let g = three_triangles();
        let c1 = circuit_from_signed(&g, vec![0, 0, 1, 1, 0, 0, 1]);
        let c2 = circuit_from_signed(&g, vec![0, 0, 0, 0, 1, 1, 1]);
        let c3 = circuit_from_signed(&g, vec![1, 1, 1, 1, 0, 0, 0]);
        let gram = gram_of_circuits(&[c1, c2, c3]).unwrap();
        let expected = [[3, 1, 2], [1, 3, 0], [2, 0, 4]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(gram.entry(i, j), &int(expected[i][j]));
            }
        }
    }

    #[test]
    fn two_triangle_basis_of_h() {
        // the two-triangle circuit basis of H, traversed so the shared edge
        // cancels, has Gram [[3,-1],[-1,3]]
        let g = two_triangles_shared_edge();
        let c1 = circuit_from_signed(&g, vec![1, 1, 0, 0, 1]);
        let c2 = circuit_from_signed(&g, vec![0, 0, -1, -1, -1]);
        let gram = gram_of_circuits(&[c1, c2]).unwrap();
        assert_eq!(gram.entry(0, 0), &int(3));
        assert_eq!(gram.entry(1, 1), &int(3));
        assert_eq!(gram.entry(0, 1), &int(-1));
    }

    #[test]
    fn fundamental_basis_four_cycle() {
        let basis = fundamental_basis(&four_cycle());
        assert_eq!(basis.circuits.len(), 1);
        assert_eq!(basis.gram.entry(0, 0), &int(4));
    }

    #[test]
    fn fundamental_basis_two_triangles() {
        // the two-triangle basis of H has Gram [[3,-1],[-1,3]] up to sign
        // choices; BFS from vertex 0 yields circuits of length 3 here
        let basis = fundamental_basis(&two_triangles_shared_edge());
        assert_eq!(basis.circuits.len(), 2);
        let d = basis.gram.to_matq().det();
        assert_eq!(d, Rat::from_integer(int(8)));
    }

    #[test]
    fn fundamental_basis_det_counts_trees() {
        for g in [
            triangle(),
            four_cycle(),
            theta(),
            three_triangles(),
            two_triangles_shared_edge(),
        ] {
            let basis = fundamental_basis(&g);
            assert_eq!(
                basis.gram.to_matq().det(),
                Rat::from_integer(spanning_tree_count(&g))
            );
        }
        assert_eq!(spanning_tree_count(&three_triangles()), int(20));
    }

    #[test]
    fn circuits_of_fixtures() {
        assert_eq!(all_circuits(&triangle()).len(), 1);
        assert_eq!(all_circuits(&theta()).len(), 3);
        assert_eq!(all_circuits(&three_triangles()).len(), 6);
        assert_eq!(all_circuits(&two_triangles_shared_edge()).len(), 3);
        // loops contribute length-1 circuits
        let mut edges = triangle().edges().to_vec();
        edges.push((0, 0));
        let g = Multigraph::new(3, edges);
        let circuits = all_circuits(&g);
        assert_eq!(circuits.len(), 2);
        assert!(circuits.iter().any(|c| c.edges.len() == 1));
    }

    /// Subset-scan oracle for the oracle: a circuit is an edge subset whose
    /// support is connected with every touched vertex of degree exactly 2,
    /// except that a loop alone is a circuit.
    fn circuits_by_subset_scan(g: &Multigraph) -> Vec<BTreeSet<usize>> {
        let m = g.n_edges();
        let mut out = Vec::new();
        for mask in 1u64..(1 << m) {
            let edges: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
            let mut degree = vec![0usize; g.n_vertices()];
            for &e in &edges {
                let (t, h) = g.edges()[e];
                degree[t] += 1;
                degree[h] += 1;
                if t == h {
                    // a loop is its own circuit and combines with nothing
                }
            }
            let touched: Vec<usize> = (0..g.n_vertices()).filter(|&v| degree[v] > 0).collect();
            if edges.len() == 1 {
                let (t, h) = g.edges()[edges[0]];
                if t == h {
                    out.push(edges.into_iter().collect());
                }
                continue;
            }
            if edges.iter().any(|&e| {
                let (t, h) = g.edges()[e];
                t == h
            }) {
                continue;
            }
            if touched.iter().any(|&v| degree[v] != 2) {
                continue;
            }
            // connectivity of the support
            let mut seen = vec![false; g.n_vertices()];
            seen[touched[0]] = true;
            let mut queue = VecDeque::from([touched[0]]);
            while let Some(u) = queue.pop_front() {
                for &e in &edges {
                    let (t, h) = g.edges()[e];
                    for (a, b) in [(t, h), (h, t)] {
                        if a == u && !seen[b] {
                            seen[b] = true;
                            queue.push_back(b);
                        }
                    }
                }
            }
            if touched.iter().all(|&v| seen[v]) {
                out.push(edges.into_iter().collect());
            }
        }
        out.sort_by(|a: &BTreeSet<usize>, b| {
            a.iter().copied().collect::<Vec<_>>().cmp(&b.iter().copied().collect())
        });
        out
    }

    #[test]
    fn dfs_circuits_match_subset_scan() {
        let mut with_loop = three_triangles().edges().to_vec();
        with_loop.push((2, 2));
        for g in [
            triangle(),
            four_cycle(),
            theta(),
            three_triangles(),
            two_triangles_shared_edge(),
            Multigraph::new(5, with_loop),
            Multigraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
        ] {
            let dfs: Vec<BTreeSet<usize>> =
                all_circuits(&g).into_iter().map(|c| c.edges).collect();
            assert_eq!(dfs, circuits_by_subset_scan(&g));
        }
    }

    #[test]
    fn strong_orientations() {
        assert_eq!(strong_orientation_count(&triangle()).unwrap(), 2);
        assert_eq!(strong_orientation_count(&four_cycle()).unwrap(), 2);
        assert_eq!(strong_orientation_count(&three_triangles()).unwrap(), 14);
        assert_eq!(
            strong_orientation_count_par(&three_triangles()).unwrap(),
            14
        );
        let big = Multigraph::new(2, vec![(0, 1); 21]);
        assert_eq!(
            strong_orientation_count(&big).unwrap_err(),
            GraphError::TooLarge
        );
    }

    #[test]
    fn spanning_trees() {
        assert_eq!(spanning_tree_count(&triangle()), int(3));
        assert_eq!(spanning_tree_count(&four_cycle()), int(4));
        assert_eq!(spanning_tree_count(&theta()), int(3));
    }

    #[test]
    fn matroid_of_triangle() {
        let m = graphic_matroid(&triangle());
        assert_eq!(m.circuits().len(), 1);
        assert_eq!(m.ground_size(), 3);
    }
}
