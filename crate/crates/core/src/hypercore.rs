//! Uniform hypergraphs, simple edge pairs and the standard constructions.
//!
//! A [`Hypergraph`] is an `n`-uniform hypergraph on the dense vertex ids
//! `0..p`. Edges are kept as sorted vertex lists in lexicographic order, so
//! an edge index is a stable, canonical handle. When `p <= 128` every edge is
//! also mirrored as a `u128` bitmask for the intersection-size tests that
//! dominate simple-pair counting.
//!
//! `m2` counts *ordered* simple pairs; the number of unordered pairs is
//! always `m2 / 2`.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigUint;
use num_integer::binomial;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coloring::{exhaustive_decide, minimal_noncolorable_core, Verdict};
use crate::error::{Error, Result};
use crate::setpairs::find_clique;

pub type Vertex = usize;

/// Largest vertex count for which edges are mirrored as `u128` masks.
pub const MASK_LIMIT: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    p: usize,
    edges: Vec<Vec<Vertex>>,
    masks: Option<Vec<u128>>,
}

/// An ordered pair of distinct edges meeting in exactly one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimplePair {
    /// Index of the first edge (`X`).
    pub first: usize,
    /// Index of the second edge (`Y`).
    pub second: usize,
    /// The unique vertex of `X ∩ Y`.
    pub meet: Vertex,
}

impl Hypergraph {
    /// Validates, deduplicates and sorts `raw_edges`.
    pub fn normalize<I, E>(raw_edges: I, n: usize, p: usize) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[Vertex]>,
    {
        if n == 0 {
            return Err(Error::InvalidParameter("uniformity n must be at least 1".into()));
        }
        let mut set = BTreeSet::new();
        for (idx, raw) in raw_edges.into_iter().enumerate() {
            let raw = raw.as_ref();
            let mut edge = raw.to_vec();
            edge.sort_unstable();
            edge.dedup();
            if edge.len() != n || raw.len() != n {
                return Err(Error::NonUniformEdge {
                    edge: idx,
                    len: edge.len(),
                    expected: n,
                });
            }
            if let Some(&v) = edge.iter().find(|&&v| v >= p) {
                return Err(Error::VertexOutOfRange { edge: idx, vertex: v, p });
            }
            set.insert(edge);
        }
        Ok(Self::from_sorted(n, p, set.into_iter().collect()))
    }

    /// Builds from edges that are already validated and canonically ordered.
    fn from_sorted(n: usize, p: usize, edges: Vec<Vec<Vertex>>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let masks = (p <= MASK_LIMIT).then(|| {
            edges
                .iter()
                .map(|e| e.iter().fold(0u128, |m, &v| m | (1u128 << v)))
                .collect()
        });
        Hypergraph { n, p, edges, masks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Declared vertex count.
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> &[Vertex] {
        &self.edges[idx]
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edge bitmasks, present when `p <= MASK_LIMIT`.
    pub fn masks(&self) -> Option<&[u128]> {
        self.masks.as_deref()
    }

    /// Index of `edge` (any vertex order) in the canonical edge list.
    pub fn edge_index(&self, edge: &[Vertex]) -> Option<usize> {
        let mut key = edge.to_vec();
        key.sort_unstable();
        self.edges.binary_search(&key).ok()
    }

    pub fn contains_edge(&self, edge: &[Vertex]) -> bool {
        self.edge_index(edge).is_some()
    }

    /// Size of the intersection of edges `i` and `j`.
    pub fn intersection_size(&self, i: usize, j: usize) -> usize {
        match &self.masks {
            Some(m) => (m[i] & m[j]).count_ones() as usize,
            None => sorted_intersection(&self.edges[i], &self.edges[j]).len(),
        }
    }

    /// The shared vertex of edges `i` and `j` if they meet in exactly one vertex.
    pub fn meet(&self, i: usize, j: usize) -> Option<Vertex> {
        if i == j {
            return None;
        }
        match &self.masks {
            Some(m) => {
                let both = m[i] & m[j];
                (both.count_ones() == 1).then(|| both.trailing_zeros() as Vertex)
            }
            None => {
                let common = sorted_intersection(&self.edges[i], &self.edges[j]);
                (common.len() == 1).then(|| common[0])
            }
        }
    }

    /// For every vertex, the indices of the edges containing it.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.p];
        for (idx, edge) in self.edges.iter().enumerate() {
            for &v in edge {
                inc[v].push(idx);
            }
        }
        inc
    }

    /// Vertices lying in at least one edge, ascending.
    pub fn covered_vertices(&self) -> Vec<Vertex> {
        let mut seen = vec![false; self.p];
        for &v in self.edges.iter().flatten() {
            seen[v] = true;
        }
        (0..self.p).filter(|&v| seen[v]).collect()
    }

    /// All ordered simple pairs, sorted by `(first, second)`, generated lazily.
    pub fn simple_pairs(&self) -> impl Iterator<Item = SimplePair> + '_ {
        let m = self.edges.len();
        (0..m).flat_map(move |i| {
            (0..m).filter_map(move |j| {
                self.meet(i, j).map(|meet| SimplePair { first: i, second: j, meet })
            })
        })
    }

    /// The sub-hypergraph keeping only the listed edge indices (same `n` and `p`).
    pub fn with_edges(&self, keep: &[usize]) -> Hypergraph {
        let mut edges: Vec<Vec<Vertex>> = keep.iter().map(|&i| self.edges[i].clone()).collect();
        edges.sort();
        edges.dedup();
        Self::from_sorted(self.n, self.p, edges)
    }

    /// Applies the vertex relabeling `perm[v]`, which must be a permutation of `0..p`.
    pub fn relabel(&self, perm: &[Vertex]) -> Hypergraph {
        assert_eq!(perm.len(), self.p, "relabeling must cover every vertex");
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| perm[v]).collect::<Vec<_>>());
        Self::normalize(edges, self.n, self.p).expect("a permutation preserves validity")
    }
}

fn sorted_intersection(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Convenience wrapper around [`Hypergraph::normalize`].
pub fn normalize<I, E>(raw_edges: I, n: usize, p: usize) -> Result<Hypergraph>
where
    I: IntoIterator<Item = E>,
    E: AsRef<[Vertex]>,
{
    Hypergraph::normalize(raw_edges, n, p)
}

pub fn enumerate_simple_pairs(h: &Hypergraph) -> Vec<SimplePair> {
    h.simple_pairs().collect()
}

/// Number of ordered simple pairs, counted without materializing them.
pub fn m2(h: &Hypergraph) -> u64 {
    let m = h.num_edges();
    let mut unordered = 0u64;
    match h.masks() {
        Some(masks) => {
            for i in 0..m {
                for j in i + 1..m {
                    if (masks[i] & masks[j]).count_ones() == 1 {
                        unordered += 1;
                    }
                }
            }
        }
        None => {
            for i in 0..m {
                for j in i + 1..m {
                    if h.intersection_size(i, j) == 1 {
                        unordered += 1;
                    }
                }
            }
        }
    }
    2 * unordered
}

/// `n · C(2n-1, n)`, the least number of ordered simple pairs in a
/// non-2-colorable `n`-graph.
pub fn bound(n: usize) -> BigUint {
    assert!(n >= 1, "bound is defined for n >= 1");
    BigUint::from(n) * binomial(BigUint::from(2 * n - 1), BigUint::from(n))
}

/// `C(a, b)` as an exact integer.
pub fn choose(a: usize, b: usize) -> BigUint {
    if b > a {
        return BigUint::from(0u8);
    }
    binomial(BigUint::from(a), BigUint::from(b))
}

/// The complete `n`-graph on `2n-1` vertices.
pub fn complete_hypergraph(n: usize) -> Hypergraph {
    assert!(n >= 1, "uniformity must be at least 1");
    let p = 2 * n - 1;
    Hypergraph::from_sorted(n, p, (0..p).combinations(n).collect())
}

/// Adds `extra_vertices` fresh vertices and `extra_disjoint_edges` pairwise
/// disjoint edges on them. The new edges touch no old vertex, so `m2` is
/// unchanged.
pub fn pad(h: &Hypergraph, extra_vertices: usize, extra_disjoint_edges: usize) -> Result<Hypergraph> {
    let needed = h.n * extra_disjoint_edges;
    if extra_vertices < needed {
        return Err(Error::InsufficientVertices {
            needed,
            available: extra_vertices,
        });
    }
    let base = h.p;
    let mut edges = h.edges.clone();
    edges.extend((0..extra_disjoint_edges).map(|k| (base + k * h.n..base + (k + 1) * h.n).collect()));
    edges.sort();
    Ok(Hypergraph::from_sorted(h.n, base + extra_vertices, edges))
}

/// `|E| >= |covered V|`. Only vertices lying in some edge are counted.
pub fn seymour_check(h: &Hypergraph) -> bool {
    h.num_edges() >= h.covered_vertices().len()
}

/// The Seymour inequality on an edge-minimal non-2-colorable core of `h`:
/// `Some(|E'| >= |covered V'|)`, or `None` when `h` is colorable or too large
/// for the exhaustive decider.
pub fn seymour_core_check(h: &Hypergraph, vertex_budget: usize) -> Option<bool> {
    minimal_noncolorable_core(h, vertex_budget).map(|core| seymour_check(&core))
}

/// `m` distinct uniformly random `n`-subsets of `0..p`, reproducible from `seed`.
pub fn random_hypergraph(n: usize, p: usize, m: usize, seed: u64) -> Result<Hypergraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_hypergraph_with(n, p, m, &mut rng)
}

pub(crate) fn random_hypergraph_with<R: Rng>(n: usize, p: usize, m: usize, rng: &mut R) -> Result<Hypergraph> {
    if n == 0 {
        return Err(Error::InvalidParameter("uniformity n must be at least 1".into()));
    }
    let total = choose(p, n);
    if BigUint::from(m) > total {
        return Err(Error::TooManyEdges {
            requested: m,
            available: total.to_string(),
            n,
        });
    }
    let edges: Vec<Vec<Vertex>> = if BigUint::from(m) * 2u8 >= total {
        // Dense request: total <= 2m, so listing every subset is affordable.
        let all: Vec<Vec<Vertex>> = (0..p).combinations(n).collect();
        let mut picked: Vec<usize> = index::sample(rng, all.len(), m).into_vec();
        picked.sort_unstable();
        picked.into_iter().map(|i| all[i].clone()).collect()
    } else {
        let mut set = BTreeSet::new();
        while set.len() < m {
            let mut edge = index::sample(rng, p, n).into_vec();
            edge.sort_unstable();
            set.insert(edge);
        }
        set.into_iter().collect()
    };
    Ok(Hypergraph::from_sorted(n, p, edges))
}

/// Aggregated verdicts for one hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub n: usize,
    pub p: usize,
    pub edge_count: usize,
    pub m2: u64,
    pub bound: BigUint,
    pub meets_bound_exactly: bool,
    pub seymour_ok: bool,
    pub colorable: Verdict,
    /// A `(2n-1)`-set spanning a complete `n`-graph, looked for only when the
    /// hypergraph is non-colorable and `m2` equals the bound.
    pub clique_witness: Option<Vec<Vertex>>,
}

/// Runs the counting, colorability and clique analyses. `vertex_budget` caps
/// the exhaustive colorability search (see [`exhaustive_decide`]).
pub fn analyze(h: &Hypergraph, vertex_budget: usize) -> AnalysisReport {
    let m2 = m2(h);
    let bound = bound(h.n());
    let meets_bound_exactly = BigUint::from(m2) == bound;
    let colorable = exhaustive_decide(h, vertex_budget).verdict();
    let clique_witness = if meets_bound_exactly && colorable == Verdict::No {
        find_clique(h).ok().flatten()
    } else {
        None
    };
    AnalysisReport {
        n: h.n(),
        p: h.p(),
        edge_count: h.num_edges(),
        m2,
        bound,
        meets_bound_exactly,
        seymour_ok: seymour_check(h),
        colorable,
        clique_witness,
    }
}

/// The seven lines of the Fano plane on vertices `0..7`.
pub fn fano_plane() -> Hypergraph {
    let lines = [[0, 1, 3], [1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 0], [5, 6, 1], [6, 0, 2]];
    Hypergraph::normalize(lines, 3, 7).expect("Fano lines are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Hypergraph {
        normalize([[0, 1], [1, 2], [0, 2]], 2, 3).unwrap()
    }

    /// Brute force over every ordered pair of edge indices, recomputing the
    /// intersection from scratch with sets.
    fn m2_oracle(h: &Hypergraph) -> u64 {
        let sets: Vec<BTreeSet<Vertex>> = h.edges().iter().map(|e| e.iter().copied().collect()).collect();
        let mut count = 0;
        for (i, a) in sets.iter().enumerate() {
            for (j, b) in sets.iter().enumerate() {
                if i != j && a.intersection(b).count() == 1 {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn normalize_sorts_and_dedups() {
        let h = normalize([vec![1, 0], vec![1, 2], vec![0, 2]], 2, 3).unwrap();
        assert_eq!(h.edges(), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
        let h = normalize([[0, 1], [1, 0]], 2, 2).unwrap();
        assert_eq!(h.edges(), &[vec![0, 1]]);
    }

    #[test]
    fn normalize_rejects_bad_edges() {
        assert!(matches!(
            normalize([[0, 1, 1]], 3, 3),
            Err(Error::NonUniformEdge { edge: 0, .. })
        ));
        assert!(matches!(normalize([vec![0, 1, 2]], 2, 3), Err(Error::NonUniformEdge { .. })));
        assert!(matches!(
            normalize([[0, 3]], 2, 3),
            Err(Error::VertexOutOfRange { vertex: 3, .. })
        ));
        assert!(matches!(normalize(Vec::<Vec<usize>>::new(), 0, 3), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn simple_pairs_of_small_cases() {
        let t = triangle();
        assert_eq!(enumerate_simple_pairs(&t).len() as u64, m2_oracle(&t));
        assert_eq!(m2(&t), 6);
        let disjoint = normalize([[0, 1], [2, 3]], 2, 4).unwrap();
        assert!(enumerate_simple_pairs(&disjoint).is_empty());
        assert_eq!(m2(&complete_hypergraph(3)), 30);
        assert_eq!(enumerate_simple_pairs(&complete_hypergraph(3)).len(), 30);
    }

    #[test]
    fn simple_pairs_carry_their_meet() {
        let h = complete_hypergraph(3);
        for s in h.simple_pairs() {
            let x: BTreeSet<_> = h.edge(s.first).iter().collect();
            let y: BTreeSet<_> = h.edge(s.second).iter().collect();
            assert_eq!(x.intersection(&y).copied().collect::<Vec<_>>(), vec![&s.meet]);
        }
    }

    #[test]
    fn m2_examples() {
        assert_eq!(m2(&fano_plane()), 42);
        assert_eq!(m2_oracle(&fano_plane()), 42);
        assert_eq!(m2(&complete_hypergraph(4)), 140);
        assert_eq!(m2(&normalize(Vec::<Vec<usize>>::new(), 3, 4).unwrap()), 0);
    }

    #[test]
    fn m2_without_masks_matches() {
        // p > 128 forces the sorted-list path.
        let h = random_hypergraph(3, 140, 300, 5).unwrap();
        assert!(h.masks().is_none());
        assert_eq!(m2(&h), m2_oracle(&h));
        assert_eq!(enumerate_simple_pairs(&h).len() as u64, m2(&h));
    }

    #[test]
    fn bound_values() {
        assert_eq!(bound(1), BigUint::from(1u8));
        assert_eq!(bound(2), BigUint::from(6u8));
        assert_eq!(bound(3), BigUint::from(30u8));
        // 40 · C(79, 40) is far beyond u64.
        assert!(bound(40) > BigUint::from(u64::MAX));
    }

    #[test]
    fn complete_hypergraph_shape() {
        let k2 = complete_hypergraph(2);
        assert_eq!((k2.p(), k2.num_edges()), (3, 3));
        assert_eq!(k2, triangle());
        let k3 = complete_hypergraph(3);
        assert_eq!((k3.p(), k3.num_edges()), (5, 10));
    }

    #[test]
    fn pad_keeps_m2() {
        let padded = pad(&complete_hypergraph(3), 3, 1).unwrap();
        assert_eq!((padded.p(), padded.num_edges(), m2(&padded)), (8, 11, 30));
        assert_eq!(m2_oracle(&padded), 30);
        assert_eq!(pad(&triangle(), 0, 0).unwrap(), triangle());
        assert_eq!(m2(&pad(&triangle(), 2, 1).unwrap()), 6);
        assert!(matches!(
            pad(&triangle(), 1, 1),
            Err(Error::InsufficientVertices { needed: 2, available: 1 })
        ));
    }

    #[test]
    fn seymour_examples() {
        assert!(seymour_check(&triangle()));
        assert!(!seymour_check(&normalize([[0, 1]], 2, 2).unwrap()));
        assert!(seymour_check(&fano_plane()));
        // Isolated vertices are not counted.
        assert!(seymour_check(&pad(&triangle(), 5, 0).unwrap()));
    }

    #[test]
    fn seymour_on_cores() {
        // The covered-vertex form fails on a non-minimal hypergraph; its core passes.
        let padded = pad(&triangle(), 2, 1).unwrap();
        assert!(!seymour_check(&padded));
        assert_eq!(seymour_core_check(&padded, 24), Some(true));
        assert_eq!(seymour_core_check(&normalize([[0, 1]], 2, 2).unwrap(), 24), None);
    }

    #[test]
    fn random_hypergraph_examples() {
        let full = random_hypergraph(2, 5, 10, 99).unwrap();
        assert_eq!(full, normalize((0..5).combinations(2), 2, 5).unwrap());
        let h = random_hypergraph(3, 6, 4, 1).unwrap();
        assert_eq!(h.num_edges(), 4);
        assert!(h.edges().iter().all(|e| e.len() == 3 && e.iter().all(|&v| v < 6)));
        assert_eq!(random_hypergraph(3, 9, 20, 42).unwrap(), random_hypergraph(3, 9, 20, 42).unwrap());
        assert!(matches!(random_hypergraph(2, 4, 7, 0), Err(Error::TooManyEdges { requested: 7, .. })));
    }

    #[test]
    fn fano_lines_meet_pairwise_once() {
        let f = fano_plane();
        assert_eq!(f.num_edges(), 7);
        for i in 0..7 {
            for j in 0..7 {
                if i != j {
                    assert_eq!(f.intersection_size(i, j), 1);
                }
            }
        }
    }

    #[test]
    fn analyze_extremal_clique() {
        let r = analyze(&complete_hypergraph(3), 24);
        assert_eq!(r.m2, 30);
        assert!(r.meets_bound_exactly);
        assert_eq!(r.colorable, Verdict::No);
        assert_eq!(r.clique_witness, Some(vec![0, 1, 2, 3, 4]));
        let empty = analyze(&normalize(Vec::<Vec<usize>>::new(), 3, 0).unwrap(), 24);
        assert_eq!((empty.m2, empty.colorable), (0, Verdict::Yes));
    }

    mod props {
        use super::*;
        use num_traits::ToPrimitive;
        use proptest::prelude::*;

        fn small_hypergraph() -> impl Strategy<Value = Hypergraph> {
            (2usize..=3, 4usize..=9, any::<u64>()).prop_flat_map(|(n, p, seed)| {
                let max = choose(p, n).to_usize().unwrap();
                (0..=max.min(24)).prop_map(move |m| random_hypergraph(n, p, m, seed).unwrap())
            })
        }

        proptest! {
            #[test]
            fn m2_is_even_and_matches_oracle(h in small_hypergraph()) {
                let count = m2(&h);
                prop_assert_eq!(count % 2, 0);
                prop_assert_eq!(count, m2_oracle(&h));
                prop_assert_eq!(enumerate_simple_pairs(&h).len() as u64, count);
            }

            #[test]
            fn normalize_is_idempotent(
                raw in proptest::collection::vec(proptest::collection::vec(0usize..8, 3), 0..12)
            ) {
                if let Ok(h) = normalize(&raw, 3, 8) {
                    prop_assert_eq!(normalize(h.edges(), 3, 8).unwrap(), h);
                }
            }

            #[test]
            fn padding_preserves_m2(h in small_hypergraph(), extra in 0usize..3) {
                let padded = pad(&h, extra * h.n() + 1, extra).unwrap();
                prop_assert_eq!(m2(&padded), m2(&h));
            }
        }
    }
}
