//! The reconstruction pipeline: classify circuit pairs by facet intersections,
//! choose a cancellation-free circuit basis, solve the block-size equations,
//! and assemble the circuit/block incidence matroid. Also hosts the greedy
//! spanning-tree-basis extractor.

use crate::lattice::{self, GramMatrix};
use crate::linalg::{Int, MatQ, Rat, VecQ};
use crate::voronoi::{self, VoronoiCell};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReconstructError {
    #[error("no cancellation-free unimodular circuit basis exists")]
    NoBasisFound,
    #[error("block-size system has no positive integer solution")]
    NoSolution,
    #[error("block-size system has several positive integer solutions")]
    AmbiguousSolution,
    #[error("not the flow lattice of a 2-connected graph (stage {stage}: {reason})")]
    NotAFlowLattice {
        stage: &'static str,
        reason: String,
    },
}

/// How two circuits can sit relative to each other, read off from facet
/// intersections of the cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairType {
    /// The circuits can be compatibly oriented (the facets intersect).
    Compatible,
    /// One circuit is compatible with the reverse of the other.
    AntiCompatible,
    /// Edge-disjoint circuits: both intersection patterns occur.
    Disjoint,
    /// No compatible orientation; such a pair cancels edges in the pairing.
    Incompatible,
}

/// A cancellation-free circuit basis: `r` circuit indices whose coordinate
/// matrix is unimodular and whose pairs are never [`PairType::Incompatible`].
#[derive(Clone, Debug)]
pub struct CircuitBasis {
    pub members: Vec<usize>,
    pub pair_types: Vec<Vec<PairType>>,
}

/// Positive block size per parallel class, the `n` of each 2-cut block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSolution {
    pub sizes: Vec<usize>,
}

/// The reconstructed matroid: parallel classes with their block sizes, and one
/// circuit (a set of block ids) per antipodal facet pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMatroid {
    block_sizes: Vec<usize>,
    circuits: Vec<BTreeSet<usize>>,
}

impl BlockMatroid {
    pub fn new(block_sizes: Vec<usize>, circuits: Vec<BTreeSet<usize>>) -> Self {
        assert!(block_sizes.iter().all(|&s| s >= 1));
        BlockMatroid {
            block_sizes,
            circuits,
        }
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn circuits(&self) -> &[BTreeSet<usize>] {
        &self.circuits
    }

    pub fn ground_size(&self) -> usize {
        self.block_sizes.iter().sum()
    }
}

/// Classifies a pair of distinct circuits by which of the four facets
/// `F_{±Ci}`, `F_{±Cj}` share vertices.
pub fn classify_pair(cell: &VoronoiCell, ci: usize, cj: usize) -> PairType {
    assert_ne!(ci, cj);
    let plus = cell.facet_of_circuit(ci);
    let other = cell.facet_of_circuit(cj);
    let share_pos = cell.facets_share_vertex(plus, other);
    let share_neg = cell.facets_share_vertex(plus, cell.antipodal_facet(other));
    match (share_pos, share_neg) {
        (true, false) => PairType::Compatible,
        (false, true) => PairType::AntiCompatible,
        (true, true) => PairType::Disjoint,
        (false, false) => PairType::Incompatible,
    }
}

/// Backtracking search for a circuit basis over the (norm, lex)-sorted circuit
/// vectors: `r` pairwise non-incompatible circuits with unimodular coordinate
/// matrix. The first solution in search order is returned.
pub fn choose_basis(cell: &VoronoiCell) -> Result<CircuitBasis, ReconstructError> {
    let r = cell.gram().rank();
    let n = cell.circuit_count();
    let mut pair_cache: Vec<Vec<Option<PairType>>> = vec![vec![None; n]; n];
    let pair = |a: usize, b: usize, cache: &mut Vec<Vec<Option<PairType>>>| -> PairType {
        if let Some(t) = cache[a][b] {
            return t;
        }
        let t = classify_pair(cell, a, b);
        cache[a][b] = Some(t);
        cache[b][a] = Some(t);
        t
    };

    let coords_matrix = |members: &[usize]| -> MatQ {
        MatQ::from_rows(
            members
                .iter()
                .map(|&k| {
                    let rep = cell.halfspaces()[cell.facet_of_circuit(k)].normal.clone();
                    rep.coords()
                        .iter()
                        .map(|c| Rat::from_integer(c.clone()))
                        .collect()
                })
                .collect(),
        )
    };

    fn search(
        r: usize,
        n: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        pair: &mut dyn FnMut(usize, usize) -> PairType,
        coords_matrix: &dyn Fn(&[usize]) -> MatQ,
    ) -> Option<Vec<usize>> {
        if chosen.len() == r {
            let det = coords_matrix(chosen).det();
            let one = Rat::one();
            if det == one || det == -one {
                return Some(chosen.clone());
            }
            return None;
        }
        for k in start..n {
            if chosen
                .iter()
                .any(|&p| pair(p, k) == PairType::Incompatible)
            {
                continue;
            }
            chosen.push(k);
            if coords_matrix(chosen).rank() == chosen.len() {
                if let Some(found) = search(r, n, k + 1, chosen, pair, coords_matrix) {
                    return Some(found);
                }
            }
            chosen.pop();
        }
        None
    }

    let mut chosen = Vec::new();
    let members = search(
        r,
        n,
        0,
        &mut chosen,
        &mut |a, b| pair(a, b, &mut pair_cache),
        &coords_matrix,
    )
    .ok_or(ReconstructError::NoBasisFound)?;

    let pair_types = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    if i == j {
                        PairType::Compatible
                    } else {
                        pair(members[i], members[j], &mut pair_cache)
                    }
                })
                .collect()
        })
        .collect();
    Ok(CircuitBasis {
        members,
        pair_types,
    })
}

/// The assembled block-size linear system.
#[derive(Clone, Debug)]
pub struct BlockSizeSystem {
    /// One row per basis circuit, then one per unordered pair.
    pub matrix: MatQ,
    pub rhs: VecQ,
    /// Per-class upper bound: the smallest right-hand side of an equation the
    /// class participates in; `None` when it participates in none.
    pub bounds: Vec<Option<Int>>,
}

/// The rows of the block-size linear system: one per basis circuit with
/// right-hand side `(C_i, C_i)`, one per unordered pair with right-hand side
/// `|(C_i, C_j)|`; a class participates when it appears in none of the named
/// facets.
pub fn block_size_system(cell: &VoronoiCell, basis: &CircuitBasis) -> BlockSizeSystem {
    let classes = cell.classes().len();
    let norm_of = |k: usize| {
        let v = &cell.halfspaces()[cell.facet_of_circuit(k)].normal;
        cell.gram().inner(v, v).expect("circuit has lattice rank")
    };
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    let mut push_row = |absent_from: Vec<usize>, value: Int, cell: &VoronoiCell| {
        let row: Vec<Rat> = (0..classes)
            .map(|c| {
                let excluded = absent_from
                    .iter()
                    .any(|&f| cell.facet_classes(f).contains(&c));
                if excluded {
                    Rat::zero()
                } else {
                    Rat::one()
                }
            })
            .collect();
        rows.push(row);
        rhs.push(Rat::from_integer(value));
    };
    let r = basis.members.len();
    for i in 0..r {
        let ci = basis.members[i];
        push_row(vec![cell.facet_of_circuit(ci)], norm_of(ci), cell);
    }
    for i in 0..r {
        for j in i + 1..r {
            let (ci, cj) = (basis.members[i], basis.members[j]);
            let vi = &cell.halfspaces()[cell.facet_of_circuit(ci)].normal;
            let vj = &cell.halfspaces()[cell.facet_of_circuit(cj)].normal;
            let pairing = cell.gram().inner(vi, vj).expect("circuit rank").abs();
            push_row(
                vec![cell.facet_of_circuit(ci), cell.facet_of_circuit(cj)],
                pairing,
                cell,
            );
        }
    }
    let bounds = (0..classes)
        .map(|c| {
            rows.iter()
                .zip(&rhs)
                .filter(|(row, _)| row[c].is_one())
                .map(|(_, b)| b.to_integer())
                .min()
        })
        .collect();
    BlockSizeSystem {
        matrix: MatQ::from_rows(rows),
        rhs: VecQ::new(rhs),
        bounds,
    }
}

/// Solves the block-size system exactly and checks the solution is the unique
/// positive integer one. When the system is rationally underdetermined the
/// free classes are enumerated over their integer ranges.
pub fn solve_block_sizes(
    cell: &VoronoiCell,
    basis: &CircuitBasis,
) -> Result<BlockSolution, ReconstructError> {
    let BlockSizeSystem {
        matrix: a,
        rhs: b,
        bounds,
    } = block_size_system(cell, basis);
    let classes = a.cols();
    let rref = a.rref_augmented(&b);
    if !rref.consistent {
        return Err(ReconstructError::NoSolution);
    }
    for &f in &rref.free_cols {
        if bounds[f].is_none() {
            // a class no equation mentions can take any value
            return Err(ReconstructError::AmbiguousSolution);
        }
    }
    let mut box_size = 1u64;
    for &f in &rref.free_cols {
        let width = bounds[f].clone().expect("checked above");
        let width = u64::try_from(width.max(Int::zero())).unwrap_or(u64::MAX);
        box_size = box_size.saturating_mul(width);
        if box_size > 10_000_000 {
            return Err(ReconstructError::AmbiguousSolution);
        }
    }

    let mut solutions: Vec<Vec<usize>> = Vec::new();
    let mut assignment: Vec<Int> = rref
        .free_cols
        .iter()
        .map(|_| Int::one())
        .collect();
    'outer: loop {
        // pivot values implied by the free assignment
        let mut values = vec![Rat::zero(); classes];
        for (fi, &f) in rref.free_cols.iter().enumerate() {
            values[f] = Rat::from_integer(assignment[fi].clone());
        }
        let mut feasible = true;
        for (row, &p) in rref.pivots.iter().enumerate() {
            let mut v = rref.rhs[row].clone();
            for &f in &rref.free_cols {
                if !rref.coeffs[row][f].is_zero() {
                    v -= &rref.coeffs[row][f] * &values[f];
                }
            }
            if !v.denom().is_one() || v.numer() < &Int::one() {
                feasible = false;
                break;
            }
            values[p] = v;
        }
        if feasible {
            let sizes: Vec<usize> = values
                .iter()
                .map(|v| usize::try_from(v.to_integer()).expect("block size fits usize"))
                .collect();
            solutions.push(sizes);
            if solutions.len() > 1 {
                return Err(ReconstructError::AmbiguousSolution);
            }
        }
        // advance the free assignment within its bounds
        let mut i = 0;
        loop {
            if i == rref.free_cols.len() {
                break 'outer;
            }
            assignment[i] += 1;
            let limit = bounds[rref.free_cols[i]].clone().expect("bounded");
            if assignment[i] <= limit {
                break;
            }
            assignment[i] = Int::one();
            i += 1;
        }
        if rref.free_cols.is_empty() {
            break;
        }
    }
    match solutions.pop() {
        Some(sizes) => Ok(BlockSolution { sizes }),
        None => Err(ReconstructError::NoSolution),
    }
}

/// Assembles the block matroid: one circuit per antipodal facet pair, whose
/// blocks are exactly the classes absent from that facet.
pub fn build_matroid(cell: &VoronoiCell, solution: &BlockSolution) -> BlockMatroid {
    let classes = cell.classes().len();
    let mut circuits: Vec<BTreeSet<usize>> = (0..cell.circuit_count())
        .map(|k| {
            let plus = cell.facet_of_circuit(k);
            let minus = cell.antipodal_facet(plus);
            assert_eq!(
                cell.facet_classes(plus),
                cell.facet_classes(minus),
                "antipodal facets carry the same classes"
            );
            (0..classes)
                .filter(|c| !cell.facet_classes(plus).contains(c))
                .collect()
        })
        .collect();
    circuits.sort_by(|a, b| {
        let ka: Vec<usize> = a.iter().copied().collect();
        ka.cmp(&b.iter().copied().collect())
    });
    BlockMatroid::new(solution.sizes.clone(), circuits)
}

/// Greedy spanning-tree-basis extraction from a circuit/block incidence
/// matrix (row and column order taken as given): repeatedly mark the first 1
/// of the first unbroken row; rows left with exactly one marked 1 form the
/// basis. Returns `(basis rows, marked columns in marking order)`, 0-based.
pub fn spanning_tree_basis(incidence: &[Vec<bool>]) -> (Vec<usize>, Vec<usize>) {
    assert!(
        incidence.iter().all(|row| row.iter().any(|&x| x)),
        "every circuit must contain a block"
    );
    let rows = incidence.len();
    let mut marked: Vec<usize> = Vec::new();
    let mut broken = vec![false; rows];
    while let Some(row) = (0..rows).find(|&i| !broken[i]) {
        let col = incidence[row]
            .iter()
            .position(|&x| x)
            .expect("rows are nonempty");
        marked.push(col);
        for (i, r) in incidence.iter().enumerate() {
            if r[col] {
                broken[i] = true;
            }
        }
    }
    let basis = (0..rows)
        .filter(|&i| marked.iter().filter(|&&c| incidence[i][c]).count() == 1)
        .collect();
    (basis, marked)
}

/// Circuit/block incidence of a cell in the pipeline's deterministic order:
/// rows are circuits sorted by (norm, lex), columns are parallel classes
/// sorted by direction; entry set when the block lies inside the circuit.
pub fn block_incidence(cell: &VoronoiCell) -> Vec<Vec<bool>> {
    let classes = cell.classes().len();
    (0..cell.circuit_count())
        .map(|k| {
            let f = cell.facet_of_circuit(k);
            (0..classes)
                .map(|c| !cell.facet_classes(f).contains(&c))
                .collect()
        })
        .collect()
}

/// Full pipeline: strict Voronoi vectors, cell, basis, block sizes, matroid.
/// Genus 1 is the one special case: a single block of size `(C, C)`.
pub fn reconstruct(gram: &GramMatrix) -> Result<BlockMatroid, ReconstructError> {
    reconstruct_with(gram, false)
}

/// [`reconstruct`] with the coset searches run in parallel; same result.
pub fn reconstruct_with(
    gram: &GramMatrix,
    parallel: bool,
) -> Result<BlockMatroid, ReconstructError> {
    if gram.rank() == 1 {
        let n = usize::try_from(gram.entry(0, 0).clone()).map_err(|_| {
            ReconstructError::NotAFlowLattice {
                stage: "genus-one",
                reason: "circuit length does not fit a machine word".into(),
            }
        })?;
        return Ok(BlockMatroid::new(vec![n], vec![BTreeSet::from([0])]));
    }
    let circuits = if parallel {
        lattice::strict_voronoi_vectors_par(gram)
    } else {
        lattice::strict_voronoi_vectors(gram)
    };
    let cell =
        voronoi::build_cell(gram, &circuits).map_err(|e| ReconstructError::NotAFlowLattice {
            stage: "voronoi-cell",
            reason: e.to_string(),
        })?;
    let basis = choose_basis(&cell).map_err(|e| ReconstructError::NotAFlowLattice {
        stage: "basis-search",
        reason: e.to_string(),
    })?;
    let solution =
        solve_block_sizes(&cell, &basis).map_err(|e| ReconstructError::NotAFlowLattice {
            stage: "block-sizes",
            reason: e.to_string(),
        })?;
    Ok(build_matroid(&cell, &solution))
}
