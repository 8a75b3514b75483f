//! The Voronoi cell of the lattice as an exact H-polytope: facets come from
//! circuit vectors, vertices from incremental double description, edges from
//! the common-active-set rank test, and the edges group into parallel classes.
//!
//! All geometry is in rational coordinates with respect to the lattice basis;
//! the halfspace of a circuit vector `v` is `(x, v)_M <= (v, v)/2`.

use crate::bitset::BitSet;
use crate::lattice::{CircuitVector, GramMatrix, LatticeVector};
use crate::linalg::{primitive_integer, Int, MatQ, Rat, VecQ};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VoronoiError {
    #[error("cell construction requires rank at least 2")]
    DegenerateRank,
    #[error("halfspaces do not bound a polytope (not a flow lattice)")]
    Unbounded,
}

/// One bounding halfspace `(x, v)_M <= (v, v)/2` of the cell.
#[derive(Clone, Debug)]
pub struct Halfspace {
    /// Signed circuit vector supporting the facet.
    pub normal: LatticeVector,
    /// Half the norm of the normal.
    pub offset: Rat,
    /// Homogeneous integer row `((v,v), -2 M v)`: the inequality is
    /// `row . (t, x) >= 0` for the projective point `(t, x)`.
    row: Vec<Int>,
}

impl Halfspace {
    fn new(gram: &GramMatrix, normal: LatticeVector) -> Halfspace {
        let norm = gram
            .inner(&normal, &normal)
            .expect("normal has the lattice rank");
        let mut row = Vec::with_capacity(gram.rank() + 1);
        row.push(norm.clone());
        for e in gram.mul_vec(&normal) {
            row.push(-2 * e);
        }
        Halfspace {
            normal,
            offset: Rat::new(norm, Int::from(2)),
            row,
        }
    }

    fn eval_ray(&self, y: &[Int]) -> Int {
        self.row.iter().zip(y).map(|(a, b)| a * b).sum()
    }
}

/// Vertex of the cell with the set of facets active (tight) at it.
#[derive(Clone, Debug)]
pub struct CellVertex {
    pub point: VecQ,
    pub active: BTreeSet<usize>,
}

/// One-dimensional face of the cell.
#[derive(Clone, Debug)]
pub struct CellEdge {
    pub endpoints: (usize, usize),
    /// Primitive integer direction, canonical sign.
    pub direction: LatticeVector,
    /// Facets active on both endpoints; their normals have rank r - 1.
    pub on_facets: BTreeSet<usize>,
}

/// Maximal set of cell edges sharing a direction.
#[derive(Clone, Debug)]
pub struct ParallelClass {
    pub direction: LatticeVector,
    pub edges: Vec<usize>,
}

/// The complete combinatorial and geometric data of the Voronoi cell.
///
/// Halfspaces come in antipodal pairs: facet `2k` carries circuit `k` with
/// canonical sign and facet `2k + 1` its negative.
#[derive(Clone, Debug)]
pub struct VoronoiCell {
    gram: GramMatrix,
    halfspaces: Vec<Halfspace>,
    vertices: Vec<CellVertex>,
    edges: Vec<CellEdge>,
    classes: Vec<ParallelClass>,
    facet_classes: Vec<BTreeSet<usize>>,
    facet_adjacent: Vec<Vec<bool>>,
}

impl VoronoiCell {
    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[CellVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[CellEdge] {
        &self.edges
    }

    pub fn classes(&self) -> &[ParallelClass] {
        &self.classes
    }

    /// Number of unoriented circuits (antipodal facet pairs).
    pub fn circuit_count(&self) -> usize {
        self.halfspaces.len() / 2
    }

    /// Facet index of the circuit `k` with canonical sign.
    pub fn facet_of_circuit(&self, k: usize) -> usize {
        2 * k
    }

    /// The geometrically opposite facet.
    pub fn antipodal_facet(&self, f: usize) -> usize {
        f ^ 1
    }

    /// Parallel classes having at least one edge on the given facet.
    pub fn facet_classes(&self, facet: usize) -> &BTreeSet<usize> {
        &self.facet_classes[facet]
    }

    /// True when the two facets intersect; in a bounded polytope a nonempty
    /// face intersection always contains a vertex.
    pub fn facets_share_vertex(&self, i: usize, j: usize) -> bool {
        assert_ne!(i, j);
        self.facet_adjacent[i][j]
    }

    /// `facets=<k> vertices=<v> edges=<e> classes=<c>`
    pub fn stats_line(&self) -> String {
        format!(
            "facets={} vertices={} edges={} classes={}",
            self.halfspaces.len(),
            self.vertices.len(),
            self.edges.len(),
            self.classes.len()
        )
    }

    /// Vertex indices of a facet in cyclic order along its boundary edges;
    /// only meaningful for rank 3, where facets are polygons.
    pub fn facet_vertex_cycle(&self, facet: usize) -> Vec<usize> {
        let mut adjacency: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for e in &self.edges {
            if e.on_facets.contains(&facet) {
                let (a, b) = e.endpoints;
                adjacency.entry(a).or_default().push(b);
                adjacency.entry(b).or_default().push(a);
            }
        }
        let Some((&start, _)) = adjacency.iter().next() else {
            return Vec::new();
        };
        let mut cycle = vec![start];
        let mut prev = usize::MAX;
        let mut at = start;
        loop {
            let next = adjacency[&at]
                .iter()
                .copied()
                .find(|&w| w != prev)
                .expect("facet boundary is a cycle");
            if next == start {
                break;
            }
            cycle.push(next);
            prev = at;
            at = next;
        }
        cycle
    }
}

struct Ray {
    y: Vec<Int>,
    zero: BitSet,
}

fn primitive_ray(mut y: Vec<Int>) -> Vec<Int> {
    let mut g = Int::zero();
    for e in &y {
        g = g.gcd(e);
    }
    if !g.is_zero() {
        for e in &mut y {
            *e /= &g;
        }
    }
    y
}

/// Exact vertex enumeration by incremental double description on the
/// homogenized cone. The halfspaces must bound a full-dimensional polytope
/// containing the origin strictly.
pub fn vertex_enumeration(
    gram: &GramMatrix,
    halfspaces: &[Halfspace],
) -> Result<Vec<CellVertex>, VoronoiError> {
    let r = gram.rank();
    let dim = r + 1;
    let m = halfspaces.len();

    // greedy selection of dim rows with independent homogeneous coordinates
    let mut initial: Vec<usize> = Vec::new();
    for h in 0..m {
        if initial.len() == dim {
            break;
        }
        let mut rows: Vec<Vec<Rat>> = initial
            .iter()
            .chain(std::iter::once(&h))
            .map(|&i| {
                halfspaces[i]
                    .row
                    .iter()
                    .map(|e| Rat::from_integer(e.clone()))
                    .collect()
            })
            .collect();
        let want = rows.len();
        let mat = MatQ::from_rows(std::mem::take(&mut rows));
        if mat.rank() == want {
            initial.push(h);
        }
    }
    if initial.len() < dim {
        return Err(VoronoiError::Unbounded);
    }

    // initial simplicial cone: rays are the columns of the inverse basis
    let basis = MatQ::from_rows(
        initial
            .iter()
            .map(|&i| {
                halfspaces[i]
                    .row
                    .iter()
                    .map(|e| Rat::from_integer(e.clone()))
                    .collect()
            })
            .collect(),
    );
    let inverse = basis.inverse().expect("initial rows are independent");
    let mut rays: Vec<Ray> = (0..dim)
        .map(|k| {
            let col: Vec<Rat> = (0..dim).map(|i| inverse.at(i, k).clone()).collect();
            let col = primitive_integer(&col);
            // primitive_integer canonicalizes the sign; restore the ray
            // direction so that the selected rows evaluate non-negatively
            let mut y: Vec<Int> = col.iter().map(Rat::to_integer).collect();
            if halfspaces[initial[k]].eval_ray(&y).is_negative() {
                for e in &mut y {
                    *e = -e.clone();
                }
            }
            let mut zero = BitSet::new(m);
            for (pos, &row) in initial.iter().enumerate() {
                if pos != k {
                    zero.insert(row);
                }
            }
            Ray { y, zero }
        })
        .collect();

    let mut processed: Vec<usize> = initial.clone();
    for h in 0..m {
        if initial.contains(&h) {
            continue;
        }
        let values: Vec<Int> = rays.iter().map(|ray| halfspaces[h].eval_ray(&ray.y)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();

        let mut created: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zero.intersection(&rays[n].zero);
                let adjacent = (0..rays.len()).all(|q| {
                    q == p || q == n || !common.is_subset_of(&rays[q].zero)
                });
                if !adjacent {
                    continue;
                }
                let y: Vec<Int> = rays[p]
                    .y
                    .iter()
                    .zip(&rays[n].y)
                    .map(|(yp, yn)| &values[p] * yn - &values[n] * yp)
                    .collect();
                let y = primitive_ray(y);
                // exact active set against every processed row
                let mut zero = BitSet::new(m);
                for &row in processed.iter().chain(std::iter::once(&h)) {
                    if halfspaces[row].eval_ray(&y).is_zero() {
                        zero.insert(row);
                    }
                }
                created.push(Ray { y, zero });
            }
        }
        let mut kept: Vec<Ray> = Vec::new();
        for (i, mut ray) in rays.into_iter().enumerate() {
            if values[i].is_positive() {
                kept.push(ray);
            } else if values[i].is_zero() {
                ray.zero.insert(h);
                kept.push(ray);
            }
        }
        kept.extend(created);
        rays = kept;
        processed.push(h);
    }

    if rays.iter().any(|ray| !ray.y[0].is_positive()) {
        return Err(VoronoiError::Unbounded);
    }

    let mut vertices: Vec<CellVertex> = rays
        .iter()
        .map(|ray| {
            let t = Rat::from_integer(ray.y[0].clone());
            let point = VecQ::new(
                (1..=r)
                    .map(|i| Rat::from_integer(ray.y[i].clone()) / &t)
                    .collect(),
            );
            let active: BTreeSet<usize> = (0..m)
                .filter(|&row| halfspaces[row].eval_ray(&ray.y).is_zero())
                .collect();
            debug_assert!((0..m).all(|row| !halfspaces[row].eval_ray(&ray.y).is_negative()));
            CellVertex { point, active }
        })
        .collect();
    vertices.sort_by(|a, b| a.point.cmp(&b.point));
    vertices.dedup_by(|a, b| a.point == b.point);
    Ok(vertices)
}

fn normals_rank(halfspaces: &[Halfspace], rows: &BTreeSet<usize>, r: usize) -> usize {
    let mat = MatQ::from_rows(
        rows.iter()
            .map(|&i| {
                (0..r)
                    .map(|j| Rat::from_integer(halfspaces[i].normal[j].clone()))
                    .collect()
            })
            .collect(),
    );
    if rows.is_empty() {
        0
    } else {
        mat.rank()
    }
}

/// Edges of the cell: a vertex pair is an edge exactly when the normals active
/// on both endpoints have rank r - 1.
pub fn edge_enumeration(
    gram: &GramMatrix,
    vertices: &[CellVertex],
    halfspaces: &[Halfspace],
) -> Vec<CellEdge> {
    let r = gram.rank();
    let m = halfspaces.len();
    let masks: Vec<BitSet> = vertices
        .iter()
        .map(|v| {
            let mut b = BitSet::new(m);
            for &f in &v.active {
                b.insert(f);
            }
            b
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if masks[i].intersection_count(&masks[j]) < r - 1 {
                continue;
            }
            let common: BTreeSet<usize> = masks[i].intersection(&masks[j]).iter().collect();
            if normals_rank(halfspaces, &common, r) != r - 1 {
                continue;
            }
            let delta: Vec<Rat> = (0..r)
                .map(|k| &vertices[j].point[k] - &vertices[i].point[k])
                .collect();
            let direction = LatticeVector::new(
                primitive_integer(&delta).iter().map(Rat::to_integer).collect(),
            );
            edges.push(CellEdge {
                endpoints: (i, j),
                direction,
                on_facets: common,
            });
        }
    }
    edges
}

/// Builds the complete cell from the Gram matrix and its circuit vectors:
/// vertices by double description, edges by the rank test, parallel classes
/// and facet incidences.
pub fn build_cell(
    gram: &GramMatrix,
    circuits: &[CircuitVector],
) -> Result<VoronoiCell, VoronoiError> {
    let r = gram.rank();
    if r < 2 {
        return Err(VoronoiError::DegenerateRank);
    }
    if circuits.is_empty() {
        return Err(VoronoiError::Unbounded);
    }
    let mut sorted: Vec<&CircuitVector> = circuits.iter().collect();
    sorted.sort();
    let mut halfspaces = Vec::with_capacity(2 * sorted.len());
    for c in sorted {
        halfspaces.push(Halfspace::new(gram, c.rep().clone()));
        halfspaces.push(Halfspace::new(gram, c.rep().negated()));
    }

    let vertices = vertex_enumeration(gram, &halfspaces)?;
    for v in &vertices {
        assert_eq!(
            normals_rank(&halfspaces, &v.active, r),
            r,
            "cell vertex must have full active rank"
        );
    }
    let edges = edge_enumeration(gram, &vertices, &halfspaces);

    let mut by_direction: BTreeMap<Vec<Int>, Vec<usize>> = BTreeMap::new();
    for (ei, e) in edges.iter().enumerate() {
        by_direction
            .entry(e.direction.coords().to_vec())
            .or_default()
            .push(ei);
    }
    let classes: Vec<ParallelClass> = by_direction
        .into_iter()
        .map(|(direction, members)| ParallelClass {
            direction: LatticeVector::new(direction),
            edges: members,
        })
        .collect();

    let m = halfspaces.len();
    let mut facet_classes = vec![BTreeSet::new(); m];
    for (ci, class) in classes.iter().enumerate() {
        for &ei in &class.edges {
            for &f in &edges[ei].on_facets {
                facet_classes[f].insert(ci);
            }
        }
    }
    assert!(
        facet_classes.iter().all(|c| !c.is_empty()),
        "every facet must carry an edge"
    );

    let mut facet_adjacent = vec![vec![false; m]; m];
    for v in &vertices {
        let active: Vec<usize> = v.active.iter().copied().collect();
        for (a, &i) in active.iter().enumerate() {
            for &j in &active[a + 1..] {
                facet_adjacent[i][j] = true;
                facet_adjacent[j][i] = true;
            }
        }
    }

    Ok(VoronoiCell {
        gram: gram.clone(),
        halfspaces,
        vertices,
        edges,
        classes,
        facet_classes,
        facet_adjacent,
    })
}
