//! Set-pair systems built from simple pairs, the two-families inequality and
//! detection of complete `n`-graphs on `2n-1` vertices.
//!
//! From a hypergraph on `p` vertices we keep one simple pair `(X, Y)` for
//! every edge `Y` that occurs as a second edge ([`build_m`]) and turn it into
//! the set pair `A = X \ Y`, `B = V \ (X ∪ Y)` ([`bollobas_family`]). A family
//! with `A_i ∩ B_i = ∅` and `A_j ⊄ A_i ∪ B_i` (for `i ≠ j`) satisfies
//! `Σ 1 / C(p - |B_i|, |A_i|) <= 1`, and equality forces a common `B` with the
//! `A_i` being every `q`-subset of `V \ B`.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::coloring::VertexOrdering;
use crate::error::{Error, Result};
use crate::hypercore::{choose, Hypergraph, SimplePair, Vertex};
use crate::separation::pair_is_separated;

/// Largest number of candidate `(2n-1)`-subsets [`find_clique`] will scan.
pub const CLIQUE_SEARCH_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetPair {
    pub a: Vec<Vertex>,
    pub b: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetPairFamily {
    pub ground_size: usize,
    pub members: Vec<SetPair>,
    /// The simple pair each member was built from, when built from a hypergraph.
    pub provenance: Option<Vec<SimplePair>>,
}

impl SetPairFamily {
    /// A family over `0..ground_size`; member sets are sorted and deduplicated.
    pub fn new(ground_size: usize, members: impl IntoIterator<Item = (Vec<Vertex>, Vec<Vertex>)>) -> Self {
        let members = members
            .into_iter()
            .map(|(a, b)| SetPair {
                a: a.into_iter().sorted_unstable().dedup().collect(),
                b: b.into_iter().sorted_unstable().dedup().collect(),
            })
            .collect();
        SetPairFamily {
            ground_size,
            members,
            provenance: None,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    /// `A_i ∩ B_i ≠ ∅`.
    Disjointness,
    /// `A_j ⊆ A_i ∪ B_i`.
    Containment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub kind: ViolationKind,
    pub i: usize,
    /// The `j` of a containment violation.
    pub j: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualityStructure {
    pub common_b: Vec<Vertex>,
    pub ground_u: Vec<Vertex>,
    /// The common size of the `A_i`.
    pub q: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BollobasVerdict {
    pub conditions_ok: bool,
    pub violations: Vec<Violation>,
    pub sum: BigRational,
    pub equality: bool,
    pub common_b: Option<Vec<Vertex>>,
    pub ground_u: Option<Vec<Vertex>>,
    pub q: Option<usize>,
}

/// One simple pair per edge that occurs as a second edge: the pair whose first
/// edge has the smallest canonical index. Sorted by second edge.
pub fn build_m(h: &Hypergraph) -> Vec<SimplePair> {
    let m = h.num_edges();
    (0..m)
        .filter_map(|second| {
            (0..m).find_map(|first| h.meet(first, second).map(|meet| SimplePair { first, second, meet }))
        })
        .collect()
}

pub fn bollobas_family(h: &Hypergraph, selection: &[SimplePair]) -> SetPairFamily {
    let members = selection
        .iter()
        .map(|s| {
            let (x, y) = (h.edge(s.first), h.edge(s.second));
            let a: Vec<Vertex> = x.iter().copied().filter(|v| !y.contains(v)).collect();
            let b: Vec<Vertex> = (0..h.p()).filter(|v| !x.contains(v) && !y.contains(v)).collect();
            SetPair { a, b }
        })
        .collect();
    SetPairFamily {
        ground_size: h.p(),
        members,
        provenance: Some(selection.to_vec()),
    }
}

fn is_disjoint(a: &[Vertex], b: &[Vertex]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_err())
}

fn is_subset_of_union(a: &[Vertex], left: &[Vertex], right: &[Vertex]) -> bool {
    a.iter()
        .all(|v| left.binary_search(v).is_ok() || right.binary_search(v).is_ok())
}

/// Every violation of the two conditions, sorted.
pub fn check_conditions(family: &SetPairFamily) -> Vec<Violation> {
    let members = &family.members;
    let mut violations: Vec<Violation> = (0..members.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let SetPair { a, b } = &members[i];
            let disjoint = (!is_disjoint(a, b)).then_some(Violation {
                kind: ViolationKind::Disjointness,
                i,
                j: None,
            });
            let contained = (0..members.len())
                .filter(move |&j| j != i && is_subset_of_union(&members[j].a, a, b))
                .map(move |j| Violation {
                    kind: ViolationKind::Containment,
                    i,
                    j: Some(j),
                });
            disjoint.into_iter().chain(contained)
        })
        .collect();
    violations.sort();
    violations
}

/// `Σ 1 / C(p - |B_i|, |A_i|)`, exactly.
pub fn bollobas_sum(family: &SetPairFamily) -> Result<BigRational> {
    let p = family.ground_size;
    let mut sum = BigRational::zero();
    for (index, SetPair { a, b }) in family.members.iter().enumerate() {
        let top = p.checked_sub(b.len()).filter(|&t| a.len() <= t).ok_or(Error::DegenerateBinomial {
            index,
            top: p.saturating_sub(b.len()),
            bottom: a.len(),
        })?;
        sum += BigRational::new(BigInt::one(), BigInt::from(choose(top, a.len())));
    }
    Ok(sum)
}

/// Checks that a family meeting both conditions with sum exactly 1 has a
/// common `B` and that its `A_i` are all `q`-subsets of `U = V \ B`.
pub fn detect_equality_structure(family: &SetPairFamily) -> Result<EqualityStructure> {
    if !check_conditions(family).is_empty() {
        return Err(Error::EqualityNotApplicable("the family violates the conditions".into()));
    }
    let sum = bollobas_sum(family)?;
    if !sum.is_one() {
        return Err(Error::EqualityNotApplicable(format!("sum is {sum}, not 1")));
    }
    let first = &family.members[0];
    if let Some(i) = family.members.iter().position(|m| m.b != first.b) {
        return Err(Error::EqualityStructureViolated(format!("B_{i} differs from B_0")));
    }
    let common_b = first.b.clone();
    let ground_u: Vec<Vertex> = (0..family.ground_size)
        .filter(|v| common_b.binary_search(v).is_err())
        .collect();
    let q = first.a.len();
    if let Some(i) = family.members.iter().position(|m| m.a.len() != q) {
        return Err(Error::EqualityStructureViolated(format!("|A_{i}| differs from |A_0| = {q}")));
    }
    let distinct: Vec<&Vec<Vertex>> = family.members.iter().map(|m| &m.a).sorted().dedup().collect();
    let expected = choose(ground_u.len(), q);
    if distinct.len() != family.len() || expected != distinct.len().into() {
        return Err(Error::EqualityStructureViolated(format!(
            "{} distinct A_i for {} members, but U has {expected} subsets of size {q}",
            distinct.len(),
            family.len()
        )));
    }
    // The A_i avoid B by the disjointness condition, so these are distinct
    // q-subsets of U, as many as U has: all of them.
    Ok(EqualityStructure { common_b, ground_u, q })
}

/// Conditions, sum and (when the sum is 1) the equality structure.
pub fn bollobas_verdict(family: &SetPairFamily) -> Result<BollobasVerdict> {
    let violations = check_conditions(family);
    let conditions_ok = violations.is_empty();
    let sum = bollobas_sum(family)?;
    if conditions_ok && sum > BigRational::one() {
        return Err(Error::InequalityViolated);
    }
    let equality = conditions_ok && sum.is_one();
    let structure = if equality {
        Some(detect_equality_structure(family)?)
    } else {
        None
    };
    Ok(BollobasVerdict {
        conditions_ok,
        violations,
        sum,
        equality,
        common_b: structure.as_ref().map(|s| s.common_b.clone()),
        ground_u: structure.as_ref().map(|s| s.ground_u.clone()),
        q: structure.map(|s| s.q),
    })
}

/// Whether every `n`-subset of `u` is an edge.
pub fn is_complete_on(h: &Hypergraph, u: &[Vertex]) -> bool {
    u.iter().copied().combinations(h.n()).all(|s| h.contains_edge(&s))
}

/// The ground set `U` of the equality structure, if the set-pair family of
/// `h` reaches equality.
pub fn clique_from_equality(h: &Hypergraph) -> Option<Vec<Vertex>> {
    let family = bollobas_family(h, &build_m(h));
    bollobas_verdict(&family).ok()?.ground_u
}

/// The lexicographically smallest `(2n-1)`-set of covered vertices on which
/// every `n`-subset is an edge.
///
/// Scans candidates in lexicographic order when there are at most
/// [`CLIQUE_SEARCH_LIMIT`] of them; otherwise tries the set-pair equality
/// structure and fails with `BudgetExceeded` if that yields nothing.
pub fn find_clique(h: &Hypergraph) -> Result<Option<Vec<Vertex>>> {
    let n = h.n();
    let k = 2 * n - 1;
    let covered = h.covered_vertices();
    if covered.len() < k {
        return Ok(None);
    }
    let candidates = choose(covered.len(), k);
    if candidates.to_u64().is_some_and(|c| c <= CLIQUE_SEARCH_LIMIT) {
        // A clique vertex lies in C(2n-2, n-1) of the clique's edges.
        let need = choose(k - 1, n - 1).to_usize().unwrap_or(usize::MAX);
        let incidence = h.incidence();
        let eligible: Vec<Vertex> = covered.into_iter().filter(|&v| incidence[v].len() >= need).collect();
        let mut chosen = Vec::with_capacity(k);
        return Ok(extend_clique(h, &eligible, 0, k, &mut chosen).then_some(chosen));
    }
    match clique_from_equality(h) {
        Some(u) if is_complete_on(h, &u) => Ok(Some(u)),
        _ => Err(Error::BudgetExceeded(format!(
            "C({}, {k}) candidate sets exceed {CLIQUE_SEARCH_LIMIT}",
            h.covered_vertices().len()
        ))),
    }
}

/// Depth-first over increasing vertex sequences; a prefix survives only while
/// every `n`-subset through its newest vertex is an edge.
fn extend_clique(h: &Hypergraph, eligible: &[Vertex], from: usize, k: usize, chosen: &mut Vec<Vertex>) -> bool {
    if chosen.len() == k {
        return true;
    }
    let n = h.n();
    let still_needed = k - chosen.len();
    for idx in from..eligible.len() {
        if eligible.len() - idx < still_needed {
            break;
        }
        let v = eligible[idx];
        let consistent = chosen.len() + 1 < n
            || chosen.iter().copied().combinations(n - 1).all(|mut s| {
                s.push(v);
                h.contains_edge(&s)
            });
        if consistent {
            chosen.push(v);
            if extend_clique(h, eligible, idx + 1, k, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Two simple pairs sharing their second edge and their meet vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SharedMeet {
    pub second: usize,
    pub meet: Vertex,
    pub firsts: (usize, usize),
}

/// Simple pairs `(X, Y)` and `(X', Y)` with the same meet vertex. Extremal
/// non-2-colorable hypergraphs have none, so every edge is the second edge of
/// at most `n` simple pairs.
pub fn check_distinct_meets(h: &Hypergraph) -> Vec<SharedMeet> {
    let m = h.num_edges();
    let mut out = Vec::new();
    for second in 0..m {
        let firsts: Vec<(usize, Vertex)> = (0..m).filter_map(|x| h.meet(x, second).map(|y| (x, y))).collect();
        for (a, b) in firsts.iter().tuple_combinations() {
            if a.1 == b.1 {
                out.push(SharedMeet {
                    second,
                    meet: a.1,
                    firsts: (a.0, b.0),
                });
            }
        }
    }
    out
}

/// An ordering separating more than one simple pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiSeparation {
    pub ordering: Vec<Vertex>,
    pub separated: usize,
}

/// Every ordering of `h` separating two or more simple pairs. Extremal
/// non-2-colorable hypergraphs have none. Refuses when `p > max_p`.
pub fn check_single_separation(h: &Hypergraph, max_p: usize) -> Result<Vec<MultiSeparation>> {
    let p = h.p();
    if p > max_p {
        return Err(Error::BudgetExceeded(format!("{p}! orderings requested, limit is {max_p}!")));
    }
    let pairs: Vec<SimplePair> = h.simple_pairs().collect();
    let mut out = Vec::new();
    for seq in (0..p).permutations(p) {
        let pi = VertexOrdering::from_sequence(seq).expect("permutation");
        let separated = pairs.iter().filter(|s| pair_is_separated(h, &pi, s)).count();
        if separated > 1 {
            out.push(MultiSeparation {
                ordering: pi.sequence().to_vec(),
                separated,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::{complete_hypergraph, fano_plane, m2, normalize, pad};

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn build_m_examples() {
        let k3 = complete_hypergraph(3);
        let sel = build_m(&k3);
        assert_eq!(sel.len(), 10);
        assert!(sel.len() as u64 >= m2(&k3).div_ceil(3));
        // Every edge of K^3_5 is the second edge of exactly 3 pairs; the
        // selection keeps the one with the smallest first edge.
        for s in &sel {
            let smallest = (0..10).find(|&x| k3.meet(x, s.second).is_some()).unwrap();
            assert_eq!(s.first, smallest);
        }
        let disjoint = normalize([[0, 1], [2, 3]], 2, 4).unwrap();
        assert!(build_m(&disjoint).is_empty());
        assert_eq!(build_m(&complete_hypergraph(2)).len(), 3);
    }

    #[test]
    fn family_shapes() {
        let k3 = complete_hypergraph(3);
        let f = bollobas_family(&k3, &build_m(&k3));
        assert!(f.members.iter().all(|m| m.a.len() == 2 && m.b.is_empty()));
        let padded = pad(&k3, 3, 0).unwrap();
        let f = bollobas_family(&padded, &build_m(&padded));
        assert!(f.members.iter().all(|m| m.b == vec![5, 6, 7]));
        let tri = complete_hypergraph(2);
        let s = SimplePair { first: 0, second: 2, meet: 1 };
        assert_eq!((tri.edge(0), tri.edge(2)), (&[0, 1][..], &[1, 2][..]));
        let f = bollobas_family(&tri, &[s]);
        assert_eq!(f.members[0], SetPair { a: vec![0], b: vec![] });
        assert_eq!(f.provenance, Some(vec![s]));
    }

    #[test]
    fn condition_checks() {
        let k3 = complete_hypergraph(3);
        assert!(check_conditions(&bollobas_family(&k3, &build_m(&k3))).is_empty());
        let f = SetPairFamily::new(3, [(vec![0], vec![0])]);
        assert_eq!(
            check_conditions(&f),
            vec![Violation { kind: ViolationKind::Disjointness, i: 0, j: None }]
        );
        let f = SetPairFamily::new(3, [(vec![0], vec![]), (vec![0], vec![])]);
        let v = check_conditions(&f);
        assert!(v.contains(&Violation { kind: ViolationKind::Containment, i: 0, j: Some(1) }));
        assert!(v.contains(&Violation { kind: ViolationKind::Containment, i: 1, j: Some(0) }));
    }

    #[test]
    fn sums() {
        let k3 = complete_hypergraph(3);
        assert_eq!(bollobas_sum(&bollobas_family(&k3, &build_m(&k3))).unwrap(), ratio(1, 1));
        assert_eq!(bollobas_sum(&SetPairFamily::new(3, [(vec![0], vec![])])).unwrap(), ratio(1, 3));
        assert!(matches!(
            bollobas_sum(&SetPairFamily::new(3, [(vec![0, 1], vec![1, 2])])),
            Err(Error::DegenerateBinomial { index: 0, top: 1, bottom: 2 })
        ));
    }

    #[test]
    fn equality_structure() {
        let k3 = complete_hypergraph(3);
        let eq = detect_equality_structure(&bollobas_family(&k3, &build_m(&k3))).unwrap();
        assert_eq!(eq.common_b, Vec::<usize>::new());
        assert_eq!(eq.ground_u, vec![0, 1, 2, 3, 4]);
        assert_eq!(eq.q, 2);

        let padded = pad(&k3, 3, 0).unwrap();
        let eq = detect_equality_structure(&bollobas_family(&padded, &build_m(&padded))).unwrap();
        assert_eq!(eq.common_b, vec![5, 6, 7]);
        assert_eq!(eq.ground_u.len(), 5);

        let f = SetPairFamily::new(3, [(vec![0], vec![])]);
        assert!(matches!(detect_equality_structure(&f), Err(Error::EqualityNotApplicable(_))));
    }

    #[test]
    fn unit_sum_with_violations_is_not_equality() {
        // 1/C(2,1) + 1/C(2,1) = 1, but A_1 = {2} ⊆ A_0 ∪ B_0 = {0, 2}.
        let f = SetPairFamily::new(3, [(vec![0], vec![2]), (vec![2], vec![0])]);
        assert_eq!(bollobas_sum(&f).unwrap(), ratio(1, 1));
        assert!(!check_conditions(&f).is_empty());
        assert!(matches!(detect_equality_structure(&f), Err(Error::EqualityNotApplicable(_))));
        let v = bollobas_verdict(&f).unwrap();
        assert!(!v.equality && v.common_b.is_none());
    }

    #[test]
    fn all_q_subsets_of_u_with_common_b() {
        // A_i = every 2-subset of {0,1,2,3}, B = {4}: 6 · 1/C(4,2) = 1.
        let f = SetPairFamily::new(5, (0..4).combinations(2).map(|a| (a, vec![4])));
        let v = bollobas_verdict(&f).unwrap();
        assert!(v.conditions_ok && v.equality);
        assert_eq!(v.common_b, Some(vec![4]));
        assert_eq!(v.ground_u, Some(vec![0, 1, 2, 3]));
        assert_eq!(v.q, Some(2));
    }

    #[test]
    fn verdict_flags() {
        let k3 = complete_hypergraph(3);
        let v = bollobas_verdict(&bollobas_family(&k3, &build_m(&k3))).unwrap();
        assert!(v.conditions_ok && v.equality);
        assert_eq!(v.common_b, Some(vec![]));
        assert_eq!(v.q, Some(2));
        let fano = fano_plane();
        let v = bollobas_verdict(&bollobas_family(&fano, &build_m(&fano))).unwrap();
        assert!(!v.equality);
        assert_eq!(v.common_b, None);
    }

    #[test]
    fn cliques() {
        let padded = pad(&complete_hypergraph(3), 6, 2).unwrap();
        assert_eq!(find_clique(&padded).unwrap(), Some(vec![0, 1, 2, 3, 4]));
        assert_eq!(find_clique(&fano_plane()).unwrap(), None);
        assert_eq!(find_clique(&complete_hypergraph(2)).unwrap(), Some(vec![0, 1, 2]));
        for n in 2..=5 {
            let k = complete_hypergraph(n);
            assert_eq!(find_clique(&k).unwrap(), Some((0..2 * n - 1).collect()));
        }
    }

    #[test]
    fn clique_search_matches_subset_scan() {
        // Brute force over every 5-subset of an 8-vertex 3-graph.
        for seed in 0..40 {
            let h = crate::hypercore::random_hypergraph(3, 8, 30 + (seed as usize % 20), seed).unwrap();
            let oracle = (0..8)
                .combinations(5)
                .find(|u| u.iter().copied().combinations(3).all(|e| h.contains_edge(&e)));
            assert_eq!(find_clique(&h).unwrap(), oracle, "seed {seed}");
        }
    }

    #[test]
    fn clique_fast_path_for_large_inputs() {
        // 220 covered vertices: C(220, 5) is far beyond the scan limit.
        let padded = pad(&complete_hypergraph(3), 215, 71).unwrap();
        assert_eq!(find_clique(&padded).unwrap(), Some(vec![0, 1, 2, 3, 4]));
        let no_clique = pad(&fano_plane(), 213, 71).unwrap();
        assert!(matches!(find_clique(&no_clique), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn meet_and_separation_checks_on_extremal_and_fano() {
        let k3 = complete_hypergraph(3);
        assert!(check_distinct_meets(&k3).is_empty());
        assert!(check_single_separation(&k3, 8).unwrap().is_empty());
        // Outside the extremal setting both can fail.
        assert!(!check_distinct_meets(&fano_plane()).is_empty());
        assert!(!check_single_separation(&fano_plane(), 8).unwrap().is_empty());
        assert!(check_single_separation(&pad(&k3, 4, 0).unwrap(), 8).is_err());
    }

    #[test]
    fn sum_is_relabeling_invariant() {
        let h = crate::hypercore::random_hypergraph(3, 7, 14, 3).unwrap();
        let base = bollobas_sum(&bollobas_family(&h, &build_m(&h))).unwrap();
        let perm = [3, 6, 0, 5, 1, 4, 2];
        let g = h.relabel(&perm);
        // Relabel the family directly, keeping the same selection.
        let f = bollobas_family(&h, &build_m(&h));
        let relabeled = SetPairFamily::new(
            7,
            f.members
                .iter()
                .map(|m| (m.a.iter().map(|&v| perm[v]).collect(), m.b.iter().map(|&v| perm[v]).collect())),
        );
        assert_eq!(bollobas_sum(&relabeled).unwrap(), base);
        assert_eq!(
            bollobas_family(&g, &build_m(&g)).members.len(),
            bollobas_family(&h, &build_m(&h)).members.len()
        );
    }
}
