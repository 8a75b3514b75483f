//! Fixture generation for verification: exhaustive enumeration of small
//! 2-edge-connected multigraphs up to isomorphism, and seeded random ones.
//!
//! The corpus is loop-free; loop behavior is covered by dedicated fixtures.

use crate::graph::{validate_two_connected, Multigraph};

/// SplitMix64: tiny deterministic generator so fixture sets are reproducible
/// without an RNG dependency.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for tail in permutations(n - 1) {
        for pos in 0..n {
            let mut p = tail.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

/// Canonical labeled form of a loop-free multigraph under vertex relabeling:
/// the lexicographically smallest sorted edge list.
fn canonical_edges(edges: &[(usize, usize)], perms: &[Vec<usize>]) -> Vec<(usize, usize)> {
    perms
        .iter()
        .map(|p| {
            let mut relabeled: Vec<(usize, usize)> = edges
                .iter()
                .map(|&(t, h)| {
                    let (a, b) = (p[t], p[h]);
                    (a.min(b), a.max(b))
                })
                .collect();
            relabeled.sort();
            relabeled
        })
        .min()
        .expect("at least the identity permutation")
}

/// Every 2-edge-connected loop-free multigraph with `2..=max_n` vertices and
/// at most `max_m` edges, one representative per isomorphism class. Edge
/// lists are canonical and sorted, so the output is deterministic.
pub fn all_two_connected_multigraphs(max_n: usize, max_m: usize) -> Vec<Multigraph> {
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for n in 2..=max_n {
        let slots: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let perms = permutations(n);
        let mut mult = vec![0usize; slots.len()];
        loop {
            let m: usize = mult.iter().sum();
            if m >= 2 {
                let mut edges = Vec::with_capacity(m);
                for (slot, &count) in mult.iter().enumerate() {
                    for _ in 0..count {
                        edges.push(slots[slot]);
                    }
                }
                let mut degree = vec![0usize; n];
                for &(t, h) in &edges {
                    degree[t] += 1;
                    degree[h] += 1;
                }
                if degree.iter().all(|&d| d >= 2) {
                    let g = Multigraph::new(n, edges.clone());
                    if validate_two_connected(&g).is_ok() {
                        let canon = canonical_edges(&edges, &perms);
                        if seen.insert((n, canon.clone())) {
                            out.push(Multigraph::new(n, canon));
                        }
                    }
                }
            }
            // next multiplicity vector with sum <= max_m
            let mut i = 0;
            loop {
                if i == mult.len() {
                    break;
                }
                mult[i] += 1;
                if mult.iter().sum::<usize>() <= max_m {
                    break;
                }
                mult[i] = 0;
                i += 1;
            }
            if i == mult.len() {
                break;
            }
        }
    }
    out
}

/// Seeded random 2-edge-connected loop-free multigraphs of genus at most
/// `max_genus`: a random spanning tree plus random extra edges, rejecting
/// graphs with bridges.
pub fn random_two_connected_multigraphs(
    count: usize,
    max_genus: usize,
    seed: u64,
) -> Vec<Multigraph> {
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = 3 + rng.below(5) as usize; // 3..=7 vertices
        let genus = 1 + rng.below(max_genus as u64) as usize;
        let m = n - 1 + genus;
        let mut edges: Vec<(usize, usize)> = (1..n)
            .map(|v| (rng.below(v as u64) as usize, v))
            .collect();
        while edges.len() < m {
            let u = rng.below(n as u64) as usize;
            let v = rng.below(n as u64) as usize;
            if u != v {
                edges.push((u.min(v), u.max(v)));
            }
        }
        let g = Multigraph::new(n, edges);
        if validate_two_connected(&g).is_ok() {
            out.push(g);
        }
    }
    out
}
