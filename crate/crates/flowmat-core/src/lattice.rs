//! The lattice of integer flows, given by a Gram matrix, and the detection of
//! its circuit elements as strict Voronoi vectors.
//!
//! A vector `v` is a circuit element exactly when `±v` are the two unique
//! shortest elements of the coset `v + 2F`. Each of the `2^r - 1` nonzero
//! cosets of `F/2F` is searched by recursive coordinate enumeration with exact
//! rational interval bounds from the LDL^T decomposition of the Gram matrix.

use crate::linalg::{Int, LinalgError, MatQ, Rat, VecQ};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix must have positive dimension")]
    Empty,
}

/// Integer coordinate vector in the working basis of the lattice.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector {
    coords: Vec<Int>,
}

impl LatticeVector {
    pub fn new(coords: Vec<Int>) -> Self {
        LatticeVector { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        LatticeVector {
            coords: coords.iter().map(|&c| Int::from(c)).collect(),
        }
    }

    pub fn zeros(r: usize) -> Self {
        LatticeVector {
            coords: vec![Int::zero(); r],
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Int] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Int::is_zero)
    }

    pub fn negated(&self) -> LatticeVector {
        LatticeVector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    /// Canonical sign representative: first nonzero coordinate positive.
    pub fn canonical_sign(&self) -> LatticeVector {
        match self.coords.iter().find(|c| !c.is_zero()) {
            Some(first) if first.is_negative() => self.negated(),
            _ => self.clone(),
        }
    }

    pub fn parity(&self) -> Parity {
        Parity {
            bits: self
                .coords
                .iter()
                .map(|c| if c.is_odd() { 1 } else { 0 })
                .collect(),
        }
    }

    pub fn to_vecq(&self) -> VecQ {
        VecQ::new(
            self.coords
                .iter()
                .map(|c| Rat::from_integer(c.clone()))
                .collect(),
        )
    }
}

impl std::ops::Index<usize> for LatticeVector {
    type Output = Int;
    fn index(&self, i: usize) -> &Int {
        &self.coords[i]
    }
}

impl std::fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A coset of `F/2F`, indexed by a 0/1 bit per coordinate.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Parity {
    bits: Vec<u8>,
}

impl Parity {
    pub fn new(bits: Vec<u8>) -> Self {
        assert!(bits.iter().all(|&b| b <= 1), "parity bits must be 0 or 1");
        Parity { bits }
    }

    /// Bit `j` of `index` becomes the parity of coordinate `j`.
    pub fn from_index(index: u64, r: usize) -> Self {
        assert!(r < 64);
        Parity {
            bits: (0..r).map(|j| (index >> j & 1) as u8).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn bit(&self, j: usize) -> u8 {
        self.bits[j]
    }

    /// The 0/1 coordinate vector representing this coset.
    pub fn representative(&self) -> LatticeVector {
        LatticeVector {
            coords: self.bits.iter().map(|&b| Int::from(b)).collect(),
        }
    }
}

/// Symmetric positive-definite integer Gram matrix of a flow lattice.
///
/// The LDL^T decomposition is computed once at construction and reused by
/// every enumeration.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    r: usize,
    entries: Vec<Int>,
    chol_l: MatQ,
    chol_d: Vec<Rat>,
}

impl GramMatrix {
    pub fn new(rows: Vec<Vec<Int>>) -> Result<Self, LatticeError> {
        let r = rows.len();
        if r == 0 {
            return Err(LatticeError::Empty);
        }
        if rows.iter().any(|row| row.len() != r) {
            return Err(LatticeError::DimensionMismatch);
        }
        for i in 0..r {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
        }
        let entries: Vec<Int> = rows.into_iter().flatten().collect();
        let m = MatQ::from_fn(r, r, |i, j| Rat::from_integer(entries[i * r + j].clone()));
        let (chol_l, chol_d) = m.ldlt().map_err(|e| match e {
            LinalgError::NotPositiveDefinite => LatticeError::NotPositiveDefinite,
            _ => LatticeError::DimensionMismatch,
        })?;
        Ok(GramMatrix {
            r,
            entries,
            chol_l,
            chol_d: chol_d.iter().cloned().collect(),
        })
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        GramMatrix::new(
            rows.iter()
                .map(|row| row.iter().map(|&n| Int::from(n)).collect())
                .collect(),
        )
    }

    /// Rank of the lattice (the genus of the underlying graph).
    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn entry(&self, i: usize, j: usize) -> &Int {
        &self.entries[i * self.r + j]
    }

    pub fn to_matq(&self) -> MatQ {
        MatQ::from_fn(self.r, self.r, |i, j| {
            Rat::from_integer(self.entry(i, j).clone())
        })
    }

    /// Inner product `v^T M w` of two lattice vectors.
    pub fn inner(&self, v: &LatticeVector, w: &LatticeVector) -> Result<Int, LatticeError> {
        if v.len() != self.r || w.len() != self.r {
            return Err(LatticeError::DimensionMismatch);
        }
        Ok(self.inner_unchecked(v, w))
    }

    pub(crate) fn inner_unchecked(&self, v: &LatticeVector, w: &LatticeVector) -> Int {
        let mut acc = Int::zero();
        for i in 0..self.r {
            if v[i].is_zero() {
                continue;
            }
            let mut row = Int::zero();
            for j in 0..self.r {
                if !w[j].is_zero() {
                    row += self.entry(i, j) * &w[j];
                }
            }
            acc += &v[i] * row;
        }
        acc
    }

    pub fn norm(&self, v: &LatticeVector) -> Result<Int, LatticeError> {
        self.inner(v, v)
    }

    /// The integer vector `M v`, i.e. the Euclidean normal of the bisector
    /// hyperplane of `v` in lattice-basis coordinates.
    pub fn mul_vec(&self, v: &LatticeVector) -> Vec<Int> {
        assert_eq!(v.len(), self.r);
        (0..self.r)
            .map(|i| (0..self.r).map(|j| self.entry(i, j) * &v[j]).sum())
            .collect()
    }
}

/// A circuit element of the lattice: a strict Voronoi vector, stored with
/// canonical sign (first nonzero coordinate positive).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CircuitVector {
    rep: LatticeVector,
    norm: Int,
}

impl CircuitVector {
    pub fn rep(&self) -> &LatticeVector {
        &self.rep
    }

    pub fn norm(&self) -> &Int {
        &self.norm
    }
}

impl PartialOrd for CircuitVector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CircuitVector {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.norm, &self.rep).cmp(&(&other.norm, &other.rep))
    }
}

/// All integers `t` with `(t - center)^2 <= rho2`, as an inclusive range.
/// Computed from the floor square root of `rho2` and corrected by exact
/// rational checks.
fn integer_interval(center: &Rat, rho2: &Rat) -> (Int, Int) {
    debug_assert!(!rho2.is_negative());
    let inside = |t: &Int| {
        let d = Rat::from_integer(t.clone()) - center;
        &d * &d <= *rho2
    };
    let s = (rho2.numer() * rho2.denom()).sqrt();
    let approx = Rat::new(s, rho2.denom().clone());
    let mut hi = (center + &approx).floor().to_integer();
    loop {
        let next = &hi + 1;
        if inside(&next) {
            hi = next;
        } else {
            break;
        }
    }
    let mut lo = (center - &approx).ceil().to_integer();
    loop {
        let prev = &lo - 1;
        if inside(&prev) {
            lo = prev;
        } else {
            break;
        }
    }
    (lo, hi)
}

/// Candidate coordinates for one level, parity-filtered, nearest to the
/// interval center first (so branch-and-bound shrinks its bound quickly).
fn level_candidates(center: &Rat, rho2: &Rat, parity: Option<u8>) -> Vec<Int> {
    let (lo, hi) = integer_interval(center, rho2);
    let mut ts = Vec::new();
    let mut t = lo;
    while t <= hi {
        let keep = match parity {
            Some(p) => ((&t % 2 + 2) % 2) == Int::from(p),
            None => true,
        };
        if keep {
            ts.push(t.clone());
        }
        t += 1;
    }
    ts.sort_by_key(|t| {
        let d = Rat::from_integer(t.clone()) - center;
        &d * &d
    });
    ts
}

struct Search<'a> {
    gram: &'a GramMatrix,
    parity: Option<&'a Parity>,
    /// Non-strict norm bound; shrinks during minimization.
    bound: Rat,
    shrink: bool,
    best_found: Option<Int>,
    out: Vec<LatticeVector>,
}

impl Search<'_> {
    fn run(&mut self) {
        let r = self.gram.r;
        let mut x = vec![Int::zero(); r];
        self.descend(r - 1, &Rat::zero(), &mut x);
    }

    fn descend(&mut self, level: usize, used: &Rat, x: &mut Vec<Int>) {
        let l = &self.gram.chol_l;
        let d = &self.gram.chol_d[level];
        let mut c = Rat::zero();
        for i in level + 1..self.gram.r {
            if !x[i].is_zero() {
                c += l.at(i, level) * Rat::from_integer(x[i].clone());
            }
        }
        let center = -&c;
        let rho2 = (&self.bound - used) / d;
        if rho2.is_negative() {
            return;
        }
        let pbit = self.parity.map(|p| p.bit(level));
        for t in level_candidates(&center, &rho2, pbit) {
            let y = Rat::from_integer(t.clone()) + &c;
            let contribution = &y * &y * d;
            let used_next = used + &contribution;
            // the bound may have shrunk since the candidates were listed
            if used_next > self.bound {
                continue;
            }
            x[level] = t;
            if level == 0 {
                self.emit(&used_next, x);
            } else {
                self.descend(level - 1, &used_next, x);
            }
        }
        x[level] = Int::zero();
    }

    fn emit(&mut self, norm: &Rat, x: &[Int]) {
        debug_assert!(norm.denom().is_one());
        let n = norm.to_integer();
        let v = LatticeVector::new(x.to_vec());
        if self.shrink {
            match &self.best_found {
                Some(best) if *best < n => {}
                Some(best) if *best == n => self.out.push(v),
                _ => {
                    self.best_found = Some(n.clone());
                    self.bound = Rat::from_integer(n);
                    self.out = vec![v];
                }
            }
        } else {
            self.out.push(v);
        }
    }
}

/// All lattice vectors `v` with `(v, v) <= bound`, optionally restricted to a
/// coset of `F/2F`. Output is sorted by (norm, lexicographic coordinates).
pub fn enumerate_by_norm(
    gram: &GramMatrix,
    bound: &Int,
    parity: Option<&Parity>,
) -> Vec<LatticeVector> {
    assert!(!bound.is_negative(), "bound must be non-negative");
    if let Some(p) = parity {
        assert_eq!(p.len(), gram.r, "parity length must match the rank");
    }
    let mut search = Search {
        gram,
        parity,
        bound: Rat::from_integer(bound.clone()),
        shrink: false,
        best_found: None,
        out: Vec::new(),
    };
    search.run();
    let mut out = search.out;
    out.sort_by_cached_key(|v| (gram.inner_unchecked(v, v), v.clone()));
    out
}

/// Minimal norm over a nonzero coset of `F/2F` together with every vector
/// attaining it. The search starts from the norm of the 0/1 representative
/// and tightens as shorter vectors are found.
pub fn coset_minima(gram: &GramMatrix, parity: &Parity) -> (Int, Vec<LatticeVector>) {
    assert!(!parity.is_zero(), "coset_minima requires a nonzero parity");
    assert_eq!(parity.len(), gram.r);
    let rep = parity.representative();
    let initial = gram.inner_unchecked(&rep, &rep);
    let mut search = Search {
        gram,
        parity: Some(parity),
        bound: Rat::from_integer(initial),
        shrink: true,
        best_found: None,
        out: Vec::new(),
    };
    search.run();
    let min_norm = search.best_found.expect("coset contains its representative");
    let mut minima = search.out;
    minima.sort();
    (min_norm, minima)
}

fn coset_circuit(gram: &GramMatrix, index: u64) -> Option<CircuitVector> {
    let parity = Parity::from_index(index, gram.r);
    let (min_norm, minima) = coset_minima(gram, &parity);
    debug_assert!(minima.len() % 2 == 0, "coset minima come in +/- pairs");
    if minima.len() == 2 {
        Some(CircuitVector {
            rep: minima[0].canonical_sign(),
            norm: min_norm,
        })
    } else {
        None
    }
}

/// The circuit elements of the lattice: one per nonzero coset of `F/2F` whose
/// minima are a single `±` pair. Sorted by (norm, lexicographic coordinates).
pub fn strict_voronoi_vectors(gram: &GramMatrix) -> Vec<CircuitVector> {
    strict_voronoi_vectors_impl(gram, false)
}

/// Same as [`strict_voronoi_vectors`] with the per-coset loop run in parallel;
/// the result is identical.
pub fn strict_voronoi_vectors_par(gram: &GramMatrix) -> Vec<CircuitVector> {
    strict_voronoi_vectors_impl(gram, true)
}

fn strict_voronoi_vectors_impl(gram: &GramMatrix, parallel: bool) -> Vec<CircuitVector> {
    let total = 1u64 << gram.r;
    let mut circuits: Vec<CircuitVector> = if parallel {
        (1..total)
            .into_par_iter()
            .filter_map(|k| coset_circuit(gram, k))
            .collect()
    } else {
        (1..total).filter_map(|k| coset_circuit(gram, k)).collect()
    };
    circuits.sort();
    circuits
}
