//! Small-case checks of the lower bound `m2 >= n · C(2n-1, n)` for
//! non-2-colorable `n`-graphs and of the clique forced at equality.
//!
//! For `n = 2` every labeled graph on up to 7 (or, with budget, 8) vertices is
//! tested: a graph is non-2-colorable iff it is not bipartite, the bound is 6
//! and the forced clique is a triangle. Each non-bipartite graph yields one
//! [`SearchRecord`] per isomorphism class. Larger `n` cannot be enumerated, so
//! [`verify_bound_sampled`] draws random hypergraphs instead and
//! [`verify_fixture_suite`] runs the full analysis pipeline on known
//! constructions.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;
use rayon::prelude::*;

use crate::coloring::{exhaustive_decide, trial_rng, Colorability, Verdict, DEFAULT_VERTEX_BUDGET};
use crate::error::{Error, Result};
use crate::hypercore::{
    bound, choose, complete_hypergraph, fano_plane, m2, normalize, pad, random_hypergraph_with,
    seymour_check, seymour_core_check, Hypergraph, Vertex,
};
use crate::separation::ORDERING_ENUMERATION_LIMIT;
use crate::setpairs::{
    bollobas_family, bollobas_verdict, build_m, check_distinct_meets, check_single_separation, find_clique,
    BollobasVerdict,
};

/// Largest vertex count for graph enumeration; edge sets fit a `u32`.
pub const MAX_GRAPH_VERTICES: usize = 8;

/// Labeled graphs on `p <= 7` vertices, summed over every `p`, fit this budget.
pub const DEFAULT_GRAPH_BUDGET: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SearchRecord {
    pub n: usize,
    pub p: usize,
    pub edge_count: usize,
    pub m2: u64,
    pub meets_bound: bool,
    pub has_clique: bool,
    /// Edge list of a canonical relabeling; equal iff isomorphic.
    pub canonical_form: Vec<Vec<Vertex>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CounterexampleKind {
    /// Non-2-colorable with `m2` below the bound.
    BelowBound,
    /// Non-2-colorable, `m2` equal to the bound, no `(2n-1)`-clique.
    EqualityWithoutClique,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Counterexample {
    pub kind: CounterexampleKind,
    pub n: usize,
    pub p: usize,
    pub m2: u64,
    pub edges: Vec<Vec<Vertex>>,
}

/// Tallies for one vertex count.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LevelStats {
    pub p: usize,
    pub tested: u64,
    pub non_colorable: u64,
    pub min_m2: Option<u64>,
    pub equality_cases: u64,
    pub equality_with_clique: u64,
    /// Non-colorable instances with fewer edges than covered vertices.
    pub seymour_violations: u64,
    /// Non-colorable instances whose minimal non-colorable core has fewer
    /// edges than covered vertices.
    pub seymour_core_violations: u64,
}

impl LevelStats {
    fn merge(mut self, other: LevelStats) -> LevelStats {
        self.tested += other.tested;
        self.non_colorable += other.non_colorable;
        self.min_m2 = match (self.min_m2, other.min_m2) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.equality_cases += other.equality_cases;
        self.equality_with_clique += other.equality_with_clique;
        self.seymour_violations += other.seymour_violations;
        self.seymour_core_violations += other.seymour_core_violations;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelResult {
    pub stats: LevelStats,
    /// One per isomorphism class of non-colorable instances, sorted by canonical form.
    pub records: Vec<SearchRecord>,
    pub counterexamples: Vec<Counterexample>,
    /// Up to [`SEYMOUR_EXAMPLES`] instances failing the covered-vertex Seymour check.
    pub seymour_examples: Vec<Vec<Vec<Vertex>>>,
}

pub const SEYMOUR_EXAMPLES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub n: usize,
    pub levels: Vec<LevelResult>,
}

impl SearchOutcome {
    pub fn totals(&self) -> LevelStats {
        self.levels
            .iter()
            .map(|l| LevelStats { p: 0, ..l.stats.clone() })
            .fold(LevelStats::default(), LevelStats::merge)
    }

    pub fn counterexamples(&self) -> impl Iterator<Item = &Counterexample> {
        self.levels.iter().flat_map(|l| &l.counterexamples)
    }

    pub fn records(&self) -> impl Iterator<Item = &SearchRecord> {
        self.levels.iter().flat_map(|l| &l.records)
    }
}

// ---------------------------------------------------------------------------
// n = 2: labeled graphs as edge bitmasks
// ---------------------------------------------------------------------------

/// Bit layout of graphs on `p` vertices: bit `i` is the `i`-th pair `(u, v)`,
/// `u < v`, in lexicographic order.
#[derive(Debug, Clone)]
pub struct GraphSpace {
    p: usize,
    pairs: Vec<(usize, usize)>,
    index: Vec<Vec<u32>>,
}

impl GraphSpace {
    pub fn new(p: usize) -> Self {
        assert!(p <= MAX_GRAPH_VERTICES, "graph enumeration supports at most {MAX_GRAPH_VERTICES} vertices");
        let pairs: Vec<(usize, usize)> = (0..p).tuple_combinations().collect();
        let mut index = vec![vec![u32::MAX; p]; p];
        for (i, &(u, v)) in pairs.iter().enumerate() {
            index[u][v] = i as u32;
            index[v][u] = i as u32;
        }
        GraphSpace { p, pairs, index }
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn adjacency(&self, mask: u32) -> [u8; MAX_GRAPH_VERTICES] {
        let mut adj = [0u8; MAX_GRAPH_VERTICES];
        for (i, &(u, v)) in self.pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
        adj
    }

    pub fn to_hypergraph(&self, mask: u32) -> Hypergraph {
        let edges = self.edges(mask);
        normalize(edges, 2, self.p).expect("pairs are valid 2-edges")
    }

    pub fn edges(&self, mask: u32) -> Vec<Vec<Vertex>> {
        self.pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &(u, v))| vec![u, v])
            .collect()
    }

    /// Smallest relabeled mask over all labelings that list vertices by
    /// ascending degree. That set of labelings is itself invariant under
    /// isomorphism, so the minimum is a canonical form.
    pub fn canonical_mask(&self, mask: u32) -> u32 {
        let adj = self.adjacency(mask);
        let degree = |v: usize| adj[v].count_ones();
        let cells: Vec<Vec<usize>> = (0..self.p)
            .sorted_by_key(|&v| degree(v))
            .chunk_by(|&v| degree(v))
            .into_iter()
            .map(|(_, cell)| cell.collect())
            .collect();
        let edges: Vec<(usize, usize)> = self
            .pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let mut best = u32::MAX;
        let mut label = [0usize; MAX_GRAPH_VERTICES];
        for_each_refined_labeling(&cells, &mut |order: &[usize]| {
            for (new, &old) in order.iter().enumerate() {
                label[old] = new;
            }
            let relabeled = edges
                .iter()
                .fold(0u32, |m, &(u, v)| m | 1 << self.index[label[u]][label[v]]);
            best = best.min(relabeled);
        });
        best
    }
}

/// Calls `f` with every vertex order obtained by concatenating one
/// permutation of each cell.
fn for_each_refined_labeling(cells: &[Vec<usize>], f: &mut dyn FnMut(&[usize])) {
    fn go(cells: &[Vec<usize>], prefix: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        match cells.split_first() {
            None => f(prefix),
            Some((cell, rest)) => {
                for perm in cell.iter().copied().permutations(cell.len()) {
                    let len = prefix.len();
                    prefix.extend(perm);
                    go(rest, prefix, f);
                    prefix.truncate(len);
                }
            }
        }
    }
    go(cells, &mut Vec::new(), f);
}

fn is_bipartite(adj: &[u8], p: usize) -> bool {
    let mut side = [0u8; MAX_GRAPH_VERTICES]; // 0 unvisited, 1 / 2 sides
    for start in 0..p {
        if side[start] != 0 {
            continue;
        }
        side[start] = 1;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            let mut nbrs = adj[u];
            while nbrs != 0 {
                let v = nbrs.trailing_zeros() as usize;
                nbrs &= nbrs - 1;
                if side[v] == 0 {
                    side[v] = 3 - side[u];
                    stack.push(v);
                } else if side[v] == side[u] {
                    return false;
                }
            }
        }
    }
    true
}

fn has_triangle(adj: &[u8], p: usize) -> bool {
    (0..p).any(|u| {
        let mut nbrs = adj[u] & !((2u8 << u) - 1);
        while nbrs != 0 {
            let v = nbrs.trailing_zeros() as usize;
            nbrs &= nbrs - 1;
            if adj[u] & adj[v] != 0 {
                return true;
            }
        }
        false
    })
}

/// `|E| >= |covered V|` for a graph given by adjacency masks.
fn graph_seymour(adj: &[u8], p: usize) -> bool {
    let edges: u32 = adj[..p].iter().map(|a| a.count_ones()).sum::<u32>() / 2;
    let covered = adj[..p].iter().filter(|&&a| a != 0).count() as u32;
    edges >= covered
}

/// Seymour inequality on an edge-minimal non-bipartite subgraph, found by
/// dropping edges in bit order while an odd cycle survives.
fn graph_seymour_core(space: &GraphSpace, mask: u32) -> bool {
    let mut core = mask;
    for i in 0..space.num_pairs() {
        if core >> i & 1 == 1 {
            let trial = core & !(1 << i);
            if !is_bipartite(&space.adjacency(trial), space.p) {
                core = trial;
            }
        }
    }
    graph_seymour(&space.adjacency(core), space.p)
}

#[derive(Default)]
struct LevelAcc {
    stats: LevelStats,
    records: BTreeMap<u32, SearchRecord>,
    counterexamples: Vec<Counterexample>,
    seymour_examples: Vec<u32>,
}

impl LevelAcc {
    fn merge(mut self, other: LevelAcc) -> LevelAcc {
        self.stats = self.stats.merge(other.stats);
        self.records.extend(other.records);
        self.counterexamples.extend(other.counterexamples);
        self.seymour_examples.extend(other.seymour_examples);
        self
    }
}

/// Total labeled graphs on `1..=max_p` vertices.
pub fn graph_enumeration_cost(max_p: usize) -> u64 {
    (1..=max_p).map(|p| 1u64 << (p * (p - 1) / 2)).sum()
}

/// Tests every labeled graph on exactly `p` vertices.
pub fn verify_graph_level(p: usize) -> Result<LevelResult> {
    if p == 0 || p > MAX_GRAPH_VERTICES {
        return Err(Error::BudgetExceeded(format!(
            "graph enumeration supports 1..={MAX_GRAPH_VERTICES} vertices, got {p}"
        )));
    }
    let space = GraphSpace::new(p);
    let total = 1u64 << space.num_pairs();
    const CHUNK: u64 = 1 << 12;
    let chunks = total.div_ceil(CHUNK);
    let acc = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = LevelAcc::default();
            for mask in c * CHUNK..((c + 1) * CHUNK).min(total) {
                visit_graph(&space, mask as u32, &mut acc);
            }
            acc
        })
        .reduce(LevelAcc::default, LevelAcc::merge);

    let mut counterexamples = acc.counterexamples;
    counterexamples.sort();
    let mut seymour = acc.seymour_examples;
    seymour.sort_unstable();
    Ok(LevelResult {
        stats: LevelStats { p, ..acc.stats },
        records: acc.records.into_values().collect(),
        counterexamples,
        seymour_examples: seymour
            .into_iter()
            .take(SEYMOUR_EXAMPLES)
            .map(|m| space.edges(m))
            .collect(),
    })
}

fn visit_graph(space: &GraphSpace, mask: u32, acc: &mut LevelAcc) {
    let p = space.p;
    acc.stats.tested += 1;
    let adj = space.adjacency(mask);
    if is_bipartite(&adj, p) {
        return;
    }
    acc.stats.non_colorable += 1;
    let m2: u64 = adj[..p].iter().map(|a| {
        let d = a.count_ones() as u64;
        d * d.saturating_sub(1)
    }).sum();
    let triangle = has_triangle(&adj, p);
    acc.stats.min_m2 = Some(acc.stats.min_m2.map_or(m2, |m| m.min(m2)));
    if m2 == 6 {
        acc.stats.equality_cases += 1;
        if triangle {
            acc.stats.equality_with_clique += 1;
        }
    }
    if !graph_seymour(&adj, p) {
        acc.stats.seymour_violations += 1;
        if acc.seymour_examples.len() < SEYMOUR_EXAMPLES {
            acc.seymour_examples.push(mask);
        }
    }
    if !graph_seymour_core(space, mask) {
        acc.stats.seymour_core_violations += 1;
    }
    let kind = if m2 < 6 {
        Some(CounterexampleKind::BelowBound)
    } else if m2 == 6 && !triangle {
        Some(CounterexampleKind::EqualityWithoutClique)
    } else {
        None
    };
    if let Some(kind) = kind {
        acc.counterexamples.push(Counterexample {
            kind,
            n: 2,
            p,
            m2,
            edges: space.edges(mask),
        });
    }
    let canon = space.canonical_mask(mask);
    acc.records.entry(canon).or_insert_with(|| SearchRecord {
        n: 2,
        p,
        edge_count: mask.count_ones() as usize,
        m2,
        meets_bound: m2 == 6,
        has_clique: triangle,
        canonical_form: space.edges(canon),
    });
}

/// Enumerates all labeled graphs on `1..=max_p` vertices (`n` must be 2).
/// Fails up front when that is more than `budget` graphs.
pub fn verify_bound_exhaustive(n: usize, max_p: usize, budget: u64) -> Result<SearchOutcome> {
    if n != 2 {
        return Err(Error::InvalidParameter(format!(
            "exhaustive enumeration covers n = 2 only; use sampling for n = {n}"
        )));
    }
    if max_p > MAX_GRAPH_VERTICES {
        return Err(Error::BudgetExceeded(format!(
            "graph enumeration supports at most {MAX_GRAPH_VERTICES} vertices"
        )));
    }
    let cost = graph_enumeration_cost(max_p);
    if cost > budget {
        return Err(Error::BudgetExceeded(format!(
            "{cost} labeled graphs on up to {max_p} vertices exceed the budget of {budget}"
        )));
    }
    let levels = (1..=max_p).map(verify_graph_level).collect::<Result<_>>()?;
    Ok(SearchOutcome { n, levels })
}

// ---------------------------------------------------------------------------
// General n: canonical forms, sampling
// ---------------------------------------------------------------------------

/// Canonical edge list of `h`: the lexicographically smallest sorted edge
/// list over all relabelings that list vertices by ascending degree.
/// Refuses when `p` exceeds [`ORDERING_ENUMERATION_LIMIT`].
pub fn canonical_form(h: &Hypergraph) -> Result<Vec<Vec<Vertex>>> {
    let p = h.p();
    if p > ORDERING_ENUMERATION_LIMIT {
        return Err(Error::BudgetExceeded(format!(
            "canonical forms are computed for at most {ORDERING_ENUMERATION_LIMIT} vertices, got {p}"
        )));
    }
    let incidence = h.incidence();
    let cells: Vec<Vec<usize>> = (0..p)
        .sorted_by_key(|&v| incidence[v].len())
        .chunk_by(|&v| incidence[v].len())
        .into_iter()
        .map(|(_, cell)| cell.collect())
        .collect();
    let mut best: Option<Vec<Vec<Vertex>>> = None;
    let mut label = vec![0usize; p];
    for_each_refined_labeling(&cells, &mut |order: &[usize]| {
        for (new, &old) in order.iter().enumerate() {
            label[old] = new;
        }
        let candidate: Vec<Vec<Vertex>> = h
            .edges()
            .iter()
            .map(|e| e.iter().map(|&v| label[v]).sorted_unstable().collect())
            .sorted()
            .collect();
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
    });
    Ok(best.unwrap_or_default())
}

fn check_instance(h: &Hypergraph, vertex_budget: usize, acc: &mut GeneralAcc) -> Result<()> {
    acc.stats.tested += 1;
    if exhaustive_decide(h, vertex_budget) != Colorability::NotColorable {
        return Ok(());
    }
    let n = h.n();
    acc.stats.non_colorable += 1;
    let m2 = m2(h);
    let b = bound(n).to_u64().expect("bound fits u64 at sampling sizes");
    acc.stats.min_m2 = Some(acc.stats.min_m2.map_or(m2, |m| m.min(m2)));
    let clique = m2 == b && find_clique(h)?.is_some();
    if m2 == b {
        acc.stats.equality_cases += 1;
        if clique {
            acc.stats.equality_with_clique += 1;
        }
    }
    if !seymour_check(h) {
        acc.stats.seymour_violations += 1;
        if acc.seymour_examples.len() < SEYMOUR_EXAMPLES {
            acc.seymour_examples.push(h.edges().to_vec());
        }
    }
    if seymour_core_check(h, vertex_budget) == Some(false) {
        acc.stats.seymour_core_violations += 1;
    }
    let kind = if m2 < b {
        Some(CounterexampleKind::BelowBound)
    } else if m2 == b && !clique {
        Some(CounterexampleKind::EqualityWithoutClique)
    } else {
        None
    };
    if let Some(kind) = kind {
        acc.counterexamples.push(Counterexample {
            kind,
            n,
            p: h.p(),
            m2,
            edges: h.edges().to_vec(),
        });
    }
    let canonical_form = canonical_form(h)?;
    acc.records.entry(canonical_form.clone()).or_insert(SearchRecord {
        n,
        p: h.p(),
        edge_count: h.num_edges(),
        m2,
        meets_bound: m2 == b,
        has_clique: clique,
        canonical_form,
    });
    Ok(())
}

#[derive(Default)]
struct GeneralAcc {
    stats: LevelStats,
    records: BTreeMap<Vec<Vec<Vertex>>, SearchRecord>,
    counterexamples: Vec<Counterexample>,
    seymour_examples: Vec<Vec<Vec<Vertex>>>,
}

/// Draws `samples` random `n`-graphs (sample `t` from stream `t` of `seed`)
/// with `2n-1 <= p <= max_p` and a uniform edge count, then checks every
/// non-2-colorable one. Records are grouped by `p`.
pub fn verify_bound_sampled(n: usize, max_p: usize, samples: u64, seed: u64) -> Result<SearchOutcome> {
    if n < 2 {
        return Err(Error::InvalidParameter("sampling needs n >= 2".into()));
    }
    let min_p = 2 * n - 1;
    if max_p < min_p {
        return Err(Error::InvalidParameter(format!("max_p must be at least 2n-1 = {min_p}")));
    }
    if max_p > ORDERING_ENUMERATION_LIMIT {
        return Err(Error::BudgetExceeded(format!(
            "sampling supports at most {ORDERING_ENUMERATION_LIMIT} vertices"
        )));
    }
    let mut by_p: BTreeMap<usize, GeneralAcc> = (min_p..=max_p).map(|p| (p, GeneralAcc::default())).collect();
    for t in 0..samples {
        let mut rng = trial_rng(seed, t);
        let p = rng.random_range(min_p..=max_p);
        let total = choose(p, n).to_usize().expect("small binomial");
        let m = rng.random_range(1..=total);
        let h = random_hypergraph_with(n, p, m, &mut rng)?;
        check_instance(&h, DEFAULT_VERTEX_BUDGET, by_p.get_mut(&p).expect("p in range"))?;
    }
    let levels = by_p
        .into_iter()
        .map(|(p, acc)| {
            let mut counterexamples = acc.counterexamples;
            counterexamples.sort();
            LevelResult {
                stats: LevelStats { p, ..acc.stats },
                records: acc.records.into_values().collect(),
                counterexamples,
                seymour_examples: acc.seymour_examples,
            }
        })
        .collect();
    Ok(SearchOutcome { n, levels })
}

// ---------------------------------------------------------------------------
// Fixture suite
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureResult {
    pub name: String,
    pub n: usize,
    pub p: usize,
    pub edge_count: usize,
    pub colorable: Verdict,
    pub m2: u64,
    pub bound: BigUint,
    pub seymour_ok: bool,
    /// Seymour inequality on a minimal non-colorable core.
    pub seymour_core_ok: Option<bool>,
    /// Non-colorable with `m2` equal to the bound.
    pub extremal: bool,
    pub clique: Option<Vec<Vertex>>,
    /// Set-pair analysis, run on extremal fixtures.
    pub bollobas: Option<BollobasVerdict>,
    /// Simple pairs sharing second edge and meet (extremal fixtures only).
    pub shared_meets: Option<usize>,
    /// Orderings separating two or more pairs (extremal fixtures, `p <= 8`).
    pub multi_separations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureReport {
    pub n: usize,
    pub results: Vec<FixtureResult>,
}

/// Non-colorable random `n`-graphs on `p` vertices found by rejection sampling.
pub fn random_noncolorable(n: usize, p: usize, wanted: usize, seed: u64, attempts: u64) -> Vec<Hypergraph> {
    let total = choose(p, n).to_usize().expect("small binomial");
    let mut found = Vec::new();
    for t in 0..attempts {
        if found.len() == wanted {
            break;
        }
        let mut rng = trial_rng(seed, t);
        let m = rng.random_range(total / 2..=total);
        let h = random_hypergraph_with(n, p, m, &mut rng).expect("m <= C(p, n)");
        if exhaustive_decide(&h, DEFAULT_VERTEX_BUDGET) == Colorability::NotColorable {
            found.push(h);
        }
    }
    found
}

/// Named fixtures for uniformity `n`.
pub fn fixtures(n: usize) -> Vec<(String, Hypergraph)> {
    let clique = complete_hypergraph(n);
    let k = 2 * n - 1;
    let mut out = vec![
        (format!("K{n}_{k}"), clique.clone()),
        (format!("K{n}_{k}+isolated"), pad(&clique, 3, 0).expect("no edges added")),
        (format!("K{n}_{k}+2disjoint"), pad(&clique, 2 * n + 1, 2).expect("enough vertices")),
    ];
    // One extra edge through clique vertex 0 raises m2 above the bound.
    let mut edges = clique.edges().to_vec();
    edges.push(std::iter::once(0).chain(k..k + n - 1).collect());
    out.push((
        format!("K{n}_{k}+pendant"),
        normalize(edges, n, k + n - 1).expect("valid pendant edge"),
    ));
    match n {
        2 => {
            let c5 = normalize((0..5).map(|i| [i, (i + 1) % 5]), 2, 5).expect("cycle");
            out.push(("C5".into(), c5));
        }
        3 => {
            out.push(("fano".into(), fano_plane()));
            out.push(("fano+disjoint".into(), pad(&fano_plane(), 3, 1).expect("enough vertices")));
        }
        _ => {}
    }
    let sizes: &[usize] = match n {
        2 => &[5, 6],
        3 => &[6, 7],
        _ => &[8, 9],
    };
    for &p in sizes {
        for (i, h) in random_noncolorable(n, p, 2, 0x5eed + p as u64, 2000).into_iter().enumerate() {
            out.push((format!("random-p{p}-{i}"), h));
        }
    }
    out
}

fn fail(name: &str, assertion: impl Into<String>) -> Error {
    Error::FixtureFailure {
        fixture: name.to_string(),
        assertion: assertion.into(),
    }
}

fn check_fixture(name: &str, h: &Hypergraph) -> Result<FixtureResult> {
    let n = h.n();
    let colorable = exhaustive_decide(h, DEFAULT_VERTEX_BUDGET).verdict();
    let m2 = m2(h);
    let bound = bound(n);
    let mut result = FixtureResult {
        name: name.to_string(),
        n,
        p: h.p(),
        edge_count: h.num_edges(),
        colorable,
        m2,
        bound: bound.clone(),
        seymour_ok: seymour_check(h),
        seymour_core_ok: seymour_core_check(h, DEFAULT_VERTEX_BUDGET),
        extremal: false,
        clique: None,
        bollobas: None,
        shared_meets: None,
        multi_separations: None,
    };
    let known_noncolorable = name.starts_with('K') || name.starts_with("fano") || name == "C5";
    if known_noncolorable && colorable != Verdict::No {
        return Err(fail(name, format!("expected non-2-colorable, decider said {colorable}")));
    }
    if colorable != Verdict::No {
        return Ok(result);
    }
    if BigUint::from(m2) < bound {
        return Err(fail(name, format!("non-colorable with m2 = {m2} < {bound}")));
    }
    result.clique = find_clique(h)?;
    if BigUint::from(m2) != bound {
        return Ok(result);
    }

    result.extremal = true;
    let selection = build_m(h);
    if (selection.len() as u64) < m2.div_ceil(n as u64) {
        return Err(fail(name, format!("selection has {} pairs, fewer than m2/n", selection.len())));
    }
    let verdict = bollobas_verdict(&bollobas_family(h, &selection)).map_err(|e| fail(name, e.to_string()))?;
    if !verdict.conditions_ok {
        return Err(fail(name, format!("set-pair conditions violated: {:?}", verdict.violations)));
    }
    if !verdict.equality {
        return Err(fail(name, format!("set-pair sum is {}, expected exactly 1", verdict.sum)));
    }
    match (&result.clique, &verdict.ground_u) {
        (Some(c), Some(u)) if c == u => {}
        (c, u) => return Err(fail(name, format!("clique {c:?} differs from U = {u:?}"))),
    }
    result.bollobas = Some(verdict);
    let shared = check_distinct_meets(h);
    if !shared.is_empty() {
        return Err(fail(name, format!("{} simple pairs share second edge and meet", shared.len())));
    }
    result.shared_meets = Some(0);
    if h.p() <= ORDERING_ENUMERATION_LIMIT {
        let multi = check_single_separation(h, ORDERING_ENUMERATION_LIMIT)?;
        if let Some(first) = multi.first() {
            return Err(fail(
                name,
                format!("ordering {:?} separates {} pairs", first.ordering, first.separated),
            ));
        }
        result.multi_separations = Some(0);
    }
    Ok(result)
}

/// Runs the whole analysis on the fixtures for `n`, stopping at the first
/// failed assertion.
pub fn verify_fixture_suite(n: usize) -> Result<FixtureReport> {
    if !(2..=4).contains(&n) {
        return Err(Error::InvalidParameter(format!("fixture suite covers n in 2..=4, got {n}")));
    }
    let results = fixtures(n)
        .iter()
        .map(|(name, h)| check_fixture(name, h))
        .collect::<Result<_>>()?;
    Ok(FixtureReport { n, results })
}
