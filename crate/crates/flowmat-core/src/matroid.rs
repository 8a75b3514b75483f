//! Circuit-incidence matroids: canonical forms and isomorphism testing, so
//! reconstructed and oracle matroids can be compared up to relabeling.
//!
//! Canonicalization is exhaustive within iterated-refinement cells rather than
//! heuristic; at desk scale correctness beats speed.

use crate::reconstruct::BlockMatroid;
use std::collections::BTreeSet;
use thiserror::Error;

/// Permutation budget for the exhaustive search within refinement cells.
const PERM_LIMIT: u64 = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidError {
    #[error("ground set too large for exhaustive canonicalization")]
    TooLarge,
    #[error("invalid circuit family: {0}")]
    Invalid(&'static str),
}

/// A matroid given by its ground-set size and its circuits (minimal dependent
/// sets). Circuits are kept sorted for deterministic output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitMatroid {
    ground_size: usize,
    circuits: Vec<BTreeSet<usize>>,
}

impl CircuitMatroid {
    pub fn new(
        ground_size: usize,
        mut circuits: Vec<BTreeSet<usize>>,
    ) -> Result<Self, MatroidError> {
        if circuits.iter().any(BTreeSet::is_empty) {
            return Err(MatroidError::Invalid("empty circuit"));
        }
        if circuits
            .iter()
            .any(|c| c.iter().any(|&e| e >= ground_size))
        {
            return Err(MatroidError::Invalid("circuit element out of range"));
        }
        for (i, a) in circuits.iter().enumerate() {
            for (j, b) in circuits.iter().enumerate() {
                if i != j && a.is_subset(b) {
                    return Err(MatroidError::Invalid(
                        "circuit contained in another circuit",
                    ));
                }
            }
        }
        let mut covered = vec![false; ground_size];
        for c in &circuits {
            for &e in c {
                covered[e] = true;
            }
        }
        if covered.iter().any(|&c| !c) {
            return Err(MatroidError::Invalid("element in no circuit (co-loop)"));
        }
        circuits.sort_by(|a, b| {
            let ka: Vec<usize> = a.iter().copied().collect();
            ka.cmp(&b.iter().copied().collect())
        });
        Ok(CircuitMatroid {
            ground_size,
            circuits,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn circuits(&self) -> &[BTreeSet<usize>] {
        &self.circuits
    }

    /// Relabel the ground set through `perm` (old index -> new index).
    pub fn permuted(&self, perm: &[usize]) -> CircuitMatroid {
        assert_eq!(perm.len(), self.ground_size);
        let circuits = self
            .circuits
            .iter()
            .map(|c| c.iter().map(|&e| perm[e]).collect())
            .collect();
        CircuitMatroid::new(self.ground_size, circuits).expect("permutation preserves validity")
    }
}

/// Canonical form: equal forms exactly when the matroids are isomorphic
/// (guaranteed by exhaustive tie-breaking within refinement cells).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub ground_size: usize,
    /// Sizes of the refinement cells in canonical order.
    pub cell_sizes: Vec<usize>,
    /// Lexicographically minimal relabeled circuit list.
    pub circuits: Vec<Vec<usize>>,
}

/// Per-element refinement data: the current color plus the multiset of
/// (size, member colors) over the circuits containing the element.
type Fingerprint = (usize, Vec<(usize, Vec<usize>)>);

/// Iterated refinement of the ground set by circuit-membership fingerprints.
/// Returns cells in a canonical (fingerprint-sorted) order; any isomorphism
/// maps cells to cells positionally.
fn refinement_cells(m: &CircuitMatroid) -> Vec<Vec<usize>> {
    let n = m.ground_size;
    let mut color = vec![0usize; n];
    let mut count = 1;
    loop {
        let fingerprint = |e: usize| -> Vec<(usize, Vec<usize>)> {
            let mut fp: Vec<(usize, Vec<usize>)> = m
                .circuits
                .iter()
                .filter(|c| c.contains(&e))
                .map(|c| {
                    let mut colors: Vec<usize> = c.iter().map(|&x| color[x]).collect();
                    colors.sort_unstable();
                    (c.len(), colors)
                })
                .collect();
            fp.sort();
            fp
        };
        let fps: Vec<Fingerprint> = (0..n).map(|e| (color[e], fingerprint(e))).collect();
        let mut unique: Vec<&Fingerprint> = fps.iter().collect();
        unique.sort();
        unique.dedup();
        let next: Vec<usize> = (0..n)
            .map(|e| unique.binary_search(&&fps[e]).expect("fingerprint present"))
            .collect();
        let next_count = unique.len();
        if next_count == count && next == color {
            break;
        }
        color = next;
        count = next_count;
    }
    let mut cells = vec![Vec::new(); count];
    for e in 0..n {
        cells[color[e]].push(e);
    }
    cells
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// Lexicographically minimal circuit incidence over all cell-respecting
/// relabelings of the ground set.
pub fn canonicalize(m: &CircuitMatroid) -> Result<CanonicalForm, MatroidError> {
    if m.ground_size > 16 {
        return Err(MatroidError::TooLarge);
    }
    let cells = refinement_cells(m);
    let mut budget = 1u64;
    for cell in &cells {
        let mut f = 1u64;
        for k in 2..=cell.len() as u64 {
            f = f.saturating_mul(k);
        }
        budget = budget.saturating_mul(f);
        if budget > PERM_LIMIT {
            return Err(MatroidError::TooLarge);
        }
    }

    let cell_perms: Vec<Vec<Vec<usize>>> = cells.iter().map(|c| permutations(c)).collect();
    let offsets: Vec<usize> = cells
        .iter()
        .scan(0, |acc, c| {
            let o = *acc;
            *acc += c.len();
            Some(o)
        })
        .collect();

    let mut best: Option<Vec<Vec<usize>>> = None;
    let mut choice = vec![0usize; cells.len()];
    loop {
        // assemble the relabeling from the per-cell permutation choices
        let mut label = vec![0usize; m.ground_size];
        for (ci, perm_set) in cell_perms.iter().enumerate() {
            for (pos, &e) in perm_set[choice[ci]].iter().enumerate() {
                label[e] = offsets[ci] + pos;
            }
        }
        let mut candidate: Vec<Vec<usize>> = m
            .circuits
            .iter()
            .map(|c| {
                let mut v: Vec<usize> = c.iter().map(|&e| label[e]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        candidate.sort();
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
        // advance the mixed-radix choice counter
        let mut i = 0;
        loop {
            if i == cells.len() {
                return Ok(CanonicalForm {
                    ground_size: m.ground_size,
                    cell_sizes: cells.iter().map(Vec::len).collect(),
                    circuits: best.expect("at least one labeling"),
                });
            }
            choice[i] += 1;
            if choice[i] < cell_perms[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// True when the two matroids are isomorphic (equal canonical forms).
pub fn is_isomorphic(a: &CircuitMatroid, b: &CircuitMatroid) -> Result<bool, MatroidError> {
    if a.ground_size != b.ground_size || a.circuits.len() != b.circuits.len() {
        return Ok(false);
    }
    let sizes = |m: &CircuitMatroid| {
        let mut s: Vec<usize> = m.circuits.iter().map(BTreeSet::len).collect();
        s.sort_unstable();
        s
    };
    if sizes(a) != sizes(b) {
        return Ok(false);
    }
    Ok(canonicalize(a)? == canonicalize(b)?)
}

/// Expands a block matroid to per-edge columns: each block becomes a
/// contiguous run of columns and circuits expand blockwise.
pub fn expand(b: &BlockMatroid) -> CircuitMatroid {
    let offsets: Vec<usize> = b
        .block_sizes()
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let ground: usize = b.block_sizes().iter().sum();
    let circuits = b
        .circuits()
        .iter()
        .map(|blocks| {
            blocks
                .iter()
                .flat_map(|&bi| offsets[bi]..offsets[bi] + b.block_sizes()[bi])
                .collect()
        })
        .collect();
    CircuitMatroid::new(ground, circuits).expect("block expansion preserves validity")
}

/// Isomorphism of block matroids, with a block-profile quick rejection before
/// expanding to per-edge columns.
pub fn blocks_isomorphic(a: &BlockMatroid, b: &BlockMatroid) -> Result<bool, MatroidError> {
    let profile = |m: &BlockMatroid| {
        let mut p: Vec<(usize, Vec<usize>)> = (0..m.block_sizes().len())
            .map(|bi| {
                let mut member_sizes: Vec<usize> = m
                    .circuits()
                    .iter()
                    .filter(|c| c.contains(&bi))
                    .map(BTreeSet::len)
                    .collect();
                member_sizes.sort_unstable();
                (m.block_sizes()[bi], member_sizes)
            })
            .collect();
        p.sort();
        p
    };
    if profile(a) != profile(b) {
        return Ok(false);
    }
    is_isomorphic(&expand(a), &expand(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matroid(ground: usize, circuits: &[&[usize]]) -> CircuitMatroid {
        CircuitMatroid::new(
            ground,
            circuits.iter().map(|c| c.iter().copied().collect()).collect(),
        )
        .unwrap()
    }

    /// The 6-circuit, 7-element matroid of the three-triangle graph.
    pub(crate) fn three_triangle_matroid() -> CircuitMatroid {
        matroid(
            7,
            &[
                &[0, 1, 4],
                &[4, 5, 6],
                &[0, 1, 2, 3],
                &[2, 3, 5, 6],
                &[0, 1, 5, 6],
                &[2, 3, 4],
            ],
        )
    }

    #[test]
    fn validation() {
        assert_eq!(
            CircuitMatroid::new(2, vec![BTreeSet::new()]).unwrap_err(),
            MatroidError::Invalid("empty circuit")
        );
        assert!(matches!(
            CircuitMatroid::new(3, vec![[0, 1].into(), [0, 1, 2].into()]).unwrap_err(),
            MatroidError::Invalid("circuit contained in another circuit")
        ));
        assert!(matches!(
            CircuitMatroid::new(3, vec![[0, 1].into()]).unwrap_err(),
            MatroidError::Invalid("element in no circuit (co-loop)")
        ));
    }

    #[test]
    fn triangle_invariant_under_relabeling() {
        let m = matroid(3, &[&[0, 1, 2]]);
        let p = m.permuted(&[2, 0, 1]);
        assert_eq!(canonicalize(&m).unwrap(), canonicalize(&p).unwrap());
    }

    #[test]
    fn theta_stable_under_all_permutations() {
        let m = matroid(3, &[&[0, 1], &[0, 2], &[1, 2]]);
        let forms: BTreeSet<Vec<Vec<usize>>> = [
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ]
        .iter()
        .map(|p| canonicalize(&m.permuted(p)).unwrap().circuits)
        .collect();
        assert_eq!(forms.len(), 1);
    }

    #[test]
    fn three_triangle_matroid_permuted_is_isomorphic() {
        let m = three_triangle_matroid();
        let p = m.permuted(&[3, 5, 0, 6, 2, 4, 1]);
        assert!(is_isomorphic(&m, &p).unwrap());
    }

    #[test]
    fn different_matroids_are_not_isomorphic() {
        let triangle = matroid(3, &[&[0, 1, 2]]);
        let square = matroid(4, &[&[0, 1, 2, 3]]);
        assert!(!is_isomorphic(&triangle, &square).unwrap());
        let theta = matroid(3, &[&[0, 1], &[0, 2], &[1, 2]]);
        assert!(!is_isomorphic(&triangle, &theta).unwrap());
    }

    #[test]
    fn expansion_of_the_rhombic_blocks() {
        // blocks of sizes (2, 2, 1, 2) with one circuit per pair of blocks
        // expand to the full 6x7 incidence matrix
        let b = BlockMatroid::new(
            vec![2, 2, 1, 2],
            vec![
                [0usize, 2].into(),
                [2, 3].into(),
                [0, 1].into(),
                [1, 3].into(),
                [0, 3].into(),
                [1, 2].into(),
            ],
        );
        let expanded = expand(&b);
        assert_eq!(expanded, three_triangle_matroid());
    }

    #[test]
    fn expansion_trivial_cases() {
        let single = BlockMatroid::new(vec![4], vec![[0usize].into()]);
        assert_eq!(expand(&single), matroid(4, &[&[0, 1, 2, 3]]));
        let unit = BlockMatroid::new(
            vec![1, 1, 1],
            vec![[0usize, 1].into(), [0, 2].into(), [1, 2].into()],
        );
        assert_eq!(expand(&unit), matroid(3, &[&[0, 1], &[0, 2], &[1, 2]]));
    }

    #[test]
    fn too_large_is_reported() {
        let m = matroid(3, &[&[0, 1, 2]]);
        assert!(canonicalize(&m).is_ok());
        let big = CircuitMatroid::new(17, vec![(0..17).collect()]).unwrap();
        assert_eq!(canonicalize(&big).unwrap_err(), MatroidError::TooLarge);
    }
}
