//! Order-driven greedy 2-coloring, properness checks and the exact decider.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypercore::{Hypergraph, SimplePair, Vertex};

/// Default cap on covered vertices for [`exhaustive_decide`].
pub const DEFAULT_VERTEX_BUDGET: usize = 24;

/// The decider packs colorings into a `u64`.
const MAX_DECIDER_VERTICES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Red,
    Blue,
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "Red",
            Color::Blue => "Blue",
        })
    }
}

/// A bijection from vertices to processing ranks.
///
/// Ranks are 0-based: the vertex processed first has rank 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexOrdering {
    sequence: Vec<Vertex>,
    ranks: Vec<usize>,
}

impl VertexOrdering {
    /// From the vertices listed in processing order.
    pub fn from_sequence(sequence: Vec<Vertex>) -> Result<Self> {
        let p = sequence.len();
        let mut ranks = vec![usize::MAX; p];
        for (rank, &v) in sequence.iter().enumerate() {
            if v >= p {
                return Err(Error::InvalidOrdering(format!("vertex {v} out of range for {p} vertices")));
            }
            if ranks[v] != usize::MAX {
                return Err(Error::InvalidOrdering(format!("vertex {v} appears twice")));
            }
            ranks[v] = rank;
        }
        Ok(VertexOrdering { sequence, ranks })
    }

    /// From `ranks[v]`, the 0-based position of vertex `v`.
    pub fn from_ranks(ranks: Vec<usize>) -> Result<Self> {
        let p = ranks.len();
        let mut sequence = vec![usize::MAX; p];
        for (v, &rank) in ranks.iter().enumerate() {
            if rank >= p {
                return Err(Error::InvalidOrdering(format!("rank {rank} out of range for {p} vertices")));
            }
            if sequence[rank] != usize::MAX {
                return Err(Error::InvalidOrdering(format!("rank {rank} used twice")));
            }
            sequence[rank] = v;
        }
        Ok(VertexOrdering { sequence, ranks })
    }

    pub fn identity(p: usize) -> Self {
        VertexOrdering {
            sequence: (0..p).collect(),
            ranks: (0..p).collect(),
        }
    }

    /// A uniformly random ordering (Fisher–Yates).
    pub fn random<R: Rng + ?Sized>(p: usize, rng: &mut R) -> Self {
        let mut sequence: Vec<Vertex> = (0..p).collect();
        sequence.shuffle(rng);
        Self::from_sequence(sequence).expect("a shuffle is a permutation")
    }

    /// The ordering drawn for trial `stream` of a run seeded with `seed`.
    /// Streams are independent, so trials can run in any order.
    pub fn seeded(p: usize, seed: u64, stream: u64) -> Self {
        Self::random(p, &mut trial_rng(seed, stream))
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn rank(&self, v: Vertex) -> usize {
        self.ranks[v]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn sequence(&self) -> &[Vertex] {
        &self.sequence
    }
}

pub(crate) fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub colors: Vec<Color>,
    pub proper: bool,
    /// Canonically first monochromatic edge, when improper.
    pub violating_edge: Option<usize>,
}

impl Coloring {
    fn evaluate(h: &Hypergraph, colors: Vec<Color>) -> Self {
        let violating_edge = first_monochromatic(h, &colors);
        Coloring {
            colors,
            proper: violating_edge.is_none(),
            violating_edge,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringOutcome {
    pub coloring: Coloring,
    /// On failure, a simple pair `(X, Y)` separated by the ordering, where `Y`
    /// is the all-Red violating edge. Always present on failure when `n >= 2`.
    pub separated_witness: Option<SimplePair>,
}

/// Greedy coloring in `pi` order: each vertex turns Blue unless that would
/// finish an all-Blue edge, in which case it turns Red.
///
/// Vertices in no edge end up Blue.
pub fn pluhar_color(h: &Hypergraph, pi: &VertexOrdering) -> Result<ColoringOutcome> {
    if pi.len() != h.p() {
        return Err(Error::InvalidOrdering(format!(
            "ordering covers {} vertices, hypergraph has {}",
            pi.len(),
            h.p()
        )));
    }
    let n = h.n();
    let incidence = h.incidence();
    // Blue vertices seen so far in each edge. The vertex being placed is still
    // uncolored, so a count of n - 1 means it would complete an all-Blue edge.
    let mut blue_count = vec![0usize; h.num_edges()];
    let mut colors = vec![Color::Blue; h.p()];
    for &v in pi.sequence() {
        if incidence[v].iter().any(|&e| blue_count[e] == n - 1) {
            colors[v] = Color::Red;
        } else {
            for &e in &incidence[v] {
                blue_count[e] += 1;
            }
        }
    }

    let coloring = Coloring::evaluate(h, colors);
    let separated_witness = coloring
        .violating_edge
        .and_then(|y_edge| extract_witness(h, pi, &coloring.colors, &incidence, y_edge));
    Ok(ColoringOutcome {
        coloring,
        separated_witness,
    })
}

/// For a Red edge `Y`, take its first vertex `y` in `pi` order. `y` turned Red
/// because some edge `X ∋ y` had its other vertices Blue and placed earlier;
/// the canonically first such `X` gives the pair `(X, Y)`.
fn extract_witness(
    h: &Hypergraph,
    pi: &VertexOrdering,
    colors: &[Color],
    incidence: &[Vec<usize>],
    y_edge: usize,
) -> Option<SimplePair> {
    let y = *h.edge(y_edge).iter().min_by_key(|&&v| pi.rank(v))?;
    let x_edge = incidence[y].iter().copied().find(|&e| {
        e != y_edge
            && h
                .edge(e)
                .iter()
                .filter(|&&u| u != y)
                .all(|&u| colors[u] == Color::Blue && pi.rank(u) < pi.rank(y))
    })?;
    Some(SimplePair {
        first: x_edge,
        second: y_edge,
        meet: y,
    })
}

fn first_monochromatic(h: &Hypergraph, colors: &[Color]) -> Option<usize> {
    h.edges().iter().position(|edge| {
        let first = colors[edge[0]];
        edge.iter().all(|&v| colors[v] == first)
    })
}

/// Index of the canonically first monochromatic edge, if any.
pub fn is_proper(h: &Hypergraph, colors: &[Color]) -> Result<Option<usize>> {
    if colors.len() < h.p() {
        return Err(Error::IncompleteColoring {
            got: colors.len(),
            expected: h.p(),
        });
    }
    Ok(first_monochromatic(h, colors))
}

/// Yes / no / undetermined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    Undetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Undetermined => "undetermined",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Colorability {
    /// A proper coloring, indexed by vertex.
    Colorable(Vec<Color>),
    NotColorable,
    /// More covered vertices than the budget allows.
    Undetermined,
}

impl Colorability {
    pub fn verdict(&self) -> Verdict {
        match self {
            Colorability::Colorable(_) => Verdict::Yes,
            Colorability::NotColorable => Verdict::No,
            Colorability::Undetermined => Verdict::Undetermined,
        }
    }
}

/// Decides 2-colorability by trying every coloring of the covered vertices,
/// with the first covered vertex pinned Blue (swapping colors preserves
/// properness). Gives up when more than `vertex_budget` vertices are covered;
/// the search never exceeds 64 covered vertices regardless of budget.
pub fn exhaustive_decide(h: &Hypergraph, vertex_budget: usize) -> Colorability {
    let covered = h.covered_vertices();
    if h.num_edges() == 0 {
        return Colorability::Colorable(vec![Color::Blue; h.p()]);
    }
    let c = covered.len();
    if c > vertex_budget || c > MAX_DECIDER_VERTICES {
        return Colorability::Undetermined;
    }
    let mut compact = vec![usize::MAX; h.p()];
    for (i, &v) in covered.iter().enumerate() {
        compact[v] = i;
    }
    let masks: Vec<u64> = h
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u64, |m, &v| m | (1u64 << compact[v])))
        .collect();

    let free = (c - 1) as u32;
    let is_proper = |bits: u64| {
        let blue = (bits << 1) | 1;
        masks.iter().all(|&e| {
            let b = e & blue;
            b != 0 && b != e
        })
    };
    let found = if free >= 16 {
        (0..1u64 << free).into_par_iter().find_first(|&bits| is_proper(bits))
    } else {
        (0..1u64 << free).find(|&bits| is_proper(bits))
    };
    match found {
        Some(bits) => {
            let blue = (bits << 1) | 1;
            let mut colors = vec![Color::Blue; h.p()];
            for (i, &v) in covered.iter().enumerate() {
                if blue >> i & 1 == 0 {
                    colors[v] = Color::Red;
                }
            }
            Colorability::Colorable(colors)
        }
        None => Colorability::NotColorable,
    }
}

/// Drops edges one at a time, in canonical order, while the remainder stays
/// non-2-colorable. The result is an edge-minimal non-2-colorable
/// sub-hypergraph, or `None` if `h` is colorable or too large to decide.
pub fn minimal_noncolorable_core(h: &Hypergraph, vertex_budget: usize) -> Option<Hypergraph> {
    if exhaustive_decide(h, vertex_budget) != Colorability::NotColorable {
        return None;
    }
    let mut keep: Vec<usize> = (0..h.num_edges()).collect();
    let mut i = 0;
    while i < keep.len() {
        let mut trial = keep.clone();
        trial.remove(i);
        if exhaustive_decide(&h.with_edges(&trial), vertex_budget) == Colorability::NotColorable {
            keep = trial;
        } else {
            i += 1;
        }
    }
    Some(h.with_edges(&keep))
}

/// Runs [`pluhar_color`] on up to `max_trials` random orderings, trial `t`
/// drawn from stream `t` of `seed`, and returns the first proper result in
/// trial order.
pub fn random_restart_color(h: &Hypergraph, max_trials: u64, seed: u64) -> Option<(VertexOrdering, Coloring)> {
    (0..max_trials).into_par_iter().find_map_first(|t| {
        let pi = VertexOrdering::seeded(h.p(), seed, t);
        let outcome = pluhar_color(h, &pi).expect("seeded ordering matches vertex count");
        outcome.coloring.proper.then_some((pi, outcome.coloring))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::{complete_hypergraph, fano_plane, normalize};

    fn triangle() -> Hypergraph {
        normalize([[0, 1], [1, 2], [0, 2]], 2, 3).unwrap()
    }

    #[test]
    fn ordering_validation() {
        assert!(VertexOrdering::from_sequence(vec![2, 0, 1]).is_ok());
        assert!(matches!(VertexOrdering::from_sequence(vec![0, 0, 1]), Err(Error::InvalidOrdering(_))));
        assert!(matches!(VertexOrdering::from_sequence(vec![0, 3, 1]), Err(Error::InvalidOrdering(_))));
        let pi = VertexOrdering::from_ranks(vec![2, 0, 1]).unwrap();
        assert_eq!(pi.sequence(), &[1, 2, 0]);
        assert!(VertexOrdering::from_ranks(vec![1, 1, 0]).is_err());
    }

    #[test]
    fn single_edge_identity_order() {
        let h = normalize([[0, 1]], 2, 2).unwrap();
        let out = pluhar_color(&h, &VertexOrdering::identity(2)).unwrap();
        assert_eq!(out.coloring.colors, vec![Color::Blue, Color::Red]);
        assert!(out.coloring.proper);
        assert_eq!(out.separated_witness, None);
    }

    #[test]
    fn triangle_hand_trace() {
        // a=0, b=1, c=2 processed in order: a Blue, b would finish {a,b} so Red,
        // c would finish {a,c} so Red; {b,c} is all Red.
        let h = triangle();
        let out = pluhar_color(&h, &VertexOrdering::identity(3)).unwrap();
        assert_eq!(out.coloring.colors, vec![Color::Blue, Color::Red, Color::Red]);
        assert!(!out.coloring.proper);
        let y = out.coloring.violating_edge.unwrap();
        assert_eq!(h.edge(y), &[1, 2]);
        let w = out.separated_witness.unwrap();
        assert_eq!(h.edge(w.first), &[0, 1]);
        assert_eq!(h.edge(w.second), &[1, 2]);
        assert_eq!(w.meet, 1);
    }

    #[test]
    fn wrong_length_ordering_is_rejected() {
        assert!(matches!(
            pluhar_color(&triangle(), &VertexOrdering::identity(4)),
            Err(Error::InvalidOrdering(_))
        ));
    }

    #[test]
    fn isolated_vertices_are_blue() {
        let h = normalize([[0, 1]], 2, 4).unwrap();
        let out = pluhar_color(&h, &VertexOrdering::from_sequence(vec![3, 1, 2, 0]).unwrap()).unwrap();
        assert_eq!(out.coloring.colors[2], Color::Blue);
        assert_eq!(out.coloring.colors[3], Color::Blue);
    }

    #[test]
    fn n1_edges_have_no_witness() {
        let h = normalize([[0]], 1, 1).unwrap();
        let out = pluhar_color(&h, &VertexOrdering::identity(1)).unwrap();
        assert!(!out.coloring.proper);
        assert_eq!(out.separated_witness, None);
    }

    #[test]
    fn is_proper_examples() {
        let t = triangle();
        assert_eq!(is_proper(&t, &[Color::Blue; 3]).unwrap(), Some(0));
        let e = normalize([[0, 1]], 2, 2).unwrap();
        assert_eq!(is_proper(&e, &[Color::Blue, Color::Red]).unwrap(), None);
        // 2 Red / 3 Blue on K^3_5: the three Blue vertices form an edge.
        let k = complete_hypergraph(3);
        let colors = [Color::Red, Color::Red, Color::Blue, Color::Blue, Color::Blue];
        let idx = is_proper(&k, &colors).unwrap().unwrap();
        assert_eq!(k.edge(idx), &[2, 3, 4]);
        assert!(matches!(is_proper(&k, &colors[..4]), Err(Error::IncompleteColoring { got: 4, expected: 5 })));
    }

    #[test]
    fn exhaustive_decide_examples() {
        assert_eq!(exhaustive_decide(&triangle(), 24), Colorability::NotColorable);
        assert_eq!(exhaustive_decide(&complete_hypergraph(3), 24), Colorability::NotColorable);
        assert_eq!(exhaustive_decide(&fano_plane(), 24), Colorability::NotColorable);
        assert_eq!(exhaustive_decide(&fano_plane(), 6), Colorability::Undetermined);
        let path = normalize([[0, 1], [1, 2], [2, 3]], 2, 5).unwrap();
        match exhaustive_decide(&path, 24) {
            Colorability::Colorable(c) => {
                assert_eq!(is_proper(&path, &c).unwrap(), None);
                assert_eq!(c[0], Color::Blue);
            }
            other => panic!("path should be colorable, got {other:?}"),
        }
        let empty = normalize(Vec::<Vec<usize>>::new(), 2, 3).unwrap();
        assert_eq!(exhaustive_decide(&empty, 0).verdict(), Verdict::Yes);
    }

    #[test]
    fn exhaustive_decide_parallel_path() {
        // 18 covered vertices takes the parallel branch; a 9-cycle plus a
        // disjoint 9-path is not bipartite.
        let mut edges: Vec<[usize; 2]> = (0..9).map(|i| [i, (i + 1) % 9]).collect();
        edges.extend((9..17).map(|i| [i, i + 1]));
        let h = normalize(&edges, 2, 18).unwrap();
        assert_eq!(exhaustive_decide(&h, 24), Colorability::NotColorable);
        let h = normalize(&edges[1..], 2, 18).unwrap();
        assert_eq!(exhaustive_decide(&h, 24).verdict(), Verdict::Yes);
    }

    #[test]
    fn random_restart_examples() {
        let e = normalize([[0, 1]], 2, 2).unwrap();
        let (pi, coloring) = random_restart_color(&e, 1, 7).unwrap();
        assert_eq!(pi.len(), 2);
        assert!(coloring.proper);
        assert_eq!(random_restart_color(&complete_hypergraph(3), 10_000, 3), None);
        // Deterministic in the seed.
        let h = normalize([[0, 1, 2], [2, 3, 4], [0, 3, 5]], 3, 6).unwrap();
        assert_eq!(random_restart_color(&h, 50, 11), random_restart_color(&h, 50, 11));
    }

    #[test]
    fn cores_are_minimal() {
        // Triangle plus a disjoint edge: the core is the triangle.
        let h = normalize([[0, 1], [1, 2], [0, 2], [3, 4]], 2, 5).unwrap();
        let core = minimal_noncolorable_core(&h, 24).unwrap();
        assert_eq!(core, normalize([[0, 1], [1, 2], [0, 2]], 2, 5).unwrap());
        let fano = fano_plane();
        let core = minimal_noncolorable_core(&fano, 24).unwrap();
        assert_eq!(core.num_edges(), 7);
        for i in 0..core.num_edges() {
            let rest: Vec<usize> = (0..core.num_edges()).filter(|&j| j != i).collect();
            assert_eq!(exhaustive_decide(&core.with_edges(&rest), 24).verdict(), Verdict::Yes);
        }
        assert_eq!(minimal_noncolorable_core(&normalize([[0, 1]], 2, 2).unwrap(), 24), None);
    }

    #[test]
    fn seeded_orderings_differ_across_streams() {
        let a = VertexOrdering::seeded(12, 1, 0);
        let b = VertexOrdering::seeded(12, 1, 1);
        assert_ne!(a, b);
        assert_eq!(a, VertexOrdering::seeded(12, 1, 0));
    }
}
