//! Separation of simple pairs by vertex orderings.
//!
//! An ordering separates the simple pair `(X, Y)` with `X ∩ Y = {y}` when all
//! of `X \ y` comes before `y` and all of `Y \ y` comes after it. Each fixed
//! simple pair of an `n`-graph is separated by a uniformly random ordering with
//! probability `(n-1)!² / (2n-1)!`, so the mean number of separated pairs is
//! `m2 / (n · C(2n-1, n))`. The exact paths below use `BigRational`; only the
//! Monte Carlo summary carries floats.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::coloring::VertexOrdering;
use crate::error::{Error, Result};
use crate::hypercore::{bound, m2, Hypergraph, SimplePair, Vertex};

/// Largest `|X ∪ Y|` accepted by [`enumerate_separation_probability`].
pub const PAIR_ENUMERATION_LIMIT: usize = 10;

/// Default largest vertex count for full-ordering enumeration.
pub const ORDERING_ENUMERATION_LIMIT: usize = 8;

/// Whether `pi` separates `(x, y)`. Fails unless the edges share exactly one vertex.
pub fn separates(pi: &VertexOrdering, x: &[Vertex], y: &[Vertex]) -> Result<bool> {
    let shared: Vec<Vertex> = x.iter().copied().filter(|v| y.contains(v)).collect();
    if shared.len() != 1 {
        return Err(Error::NotSimple { shared: shared.len() });
    }
    Ok(separates_at(pi, x, y, shared[0]))
}

#[inline]
fn separates_at(pi: &VertexOrdering, x: &[Vertex], y: &[Vertex], meet: Vertex) -> bool {
    let r = pi.rank(meet);
    x.iter().all(|&v| v == meet || pi.rank(v) < r) && y.iter().all(|&v| v == meet || pi.rank(v) > r)
}

pub fn pair_is_separated(h: &Hypergraph, pi: &VertexOrdering, pair: &SimplePair) -> bool {
    separates_at(pi, h.edge(pair.first), h.edge(pair.second), pair.meet)
}

/// Number of ordered simple pairs of `h` separated by `pi`.
pub fn count_separated(h: &Hypergraph, pi: &VertexOrdering) -> usize {
    h.simple_pairs().filter(|s| pair_is_separated(h, pi, s)).count()
}

fn count_separated_among(h: &Hypergraph, pairs: &[SimplePair], pi: &VertexOrdering) -> usize {
    pairs.iter().filter(|s| pair_is_separated(h, pi, s)).count()
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `(n-1)!² / (2n-1)!`, reduced.
pub fn exact_separation_probability(n: usize) -> BigRational {
    assert!(n >= 1, "separation probability is defined for n >= 1");
    let f = factorial(n - 1);
    BigRational::new(BigInt::from(&f * &f), BigInt::from(factorial(2 * n - 1)))
}

/// Fraction of all orderings of `X ∪ Y` that separate `(X, Y)`, by listing
/// every one of the `|X ∪ Y|!` orderings.
pub fn enumerate_separation_probability(x: &[Vertex], y: &[Vertex]) -> Result<BigRational> {
    let shared: Vec<Vertex> = x.iter().copied().filter(|v| y.contains(v)).collect();
    if shared.len() != 1 {
        return Err(Error::NotSimple { shared: shared.len() });
    }
    let union: Vec<Vertex> = x.iter().chain(y).copied().sorted_unstable().dedup().collect();
    let k = union.len();
    if k > PAIR_ENUMERATION_LIMIT {
        return Err(Error::BudgetExceeded(format!(
            "{k}! orderings of the pair's union exceed the {PAIR_ENUMERATION_LIMIT}! limit"
        )));
    }
    // Relabel the union to 0..k so each permutation is an ordering of its own.
    let local = |v: &Vertex| union.binary_search(v).expect("vertex of the union");
    let x_local: Vec<Vertex> = x.iter().map(local).collect();
    let y_local: Vec<Vertex> = y.iter().map(local).collect();
    let meet = local(&shared[0]);
    let mut hits = 0u64;
    let mut total = 0u64;
    for seq in (0..k).permutations(k) {
        let pi = VertexOrdering::from_sequence(seq).expect("permutation");
        total += 1;
        if separates_at(&pi, &x_local, &y_local, meet) {
            hits += 1;
        }
    }
    Ok(BigRational::new(BigInt::from(hits), BigInt::from(total)))
}

/// Exact mean of [`count_separated`] over all `p!` orderings of `h`.
/// Refuses when `p > max_p`.
pub fn enumerate_mean_separated(h: &Hypergraph, max_p: usize) -> Result<BigRational> {
    let p = h.p();
    if p > max_p {
        return Err(Error::BudgetExceeded(format!(
            "{p}! orderings requested, limit is {max_p}!"
        )));
    }
    let (total, hist) = separation_histogram_exhaustive(h);
    let sum: u64 = hist.iter().map(|(&k, &f)| k as u64 * f).sum();
    Ok(BigRational::new(BigInt::from(sum), BigInt::from(total)))
}

/// `(p!, histogram of separated counts)` over every ordering of `h`.
pub fn separation_histogram_exhaustive(h: &Hypergraph) -> (u64, BTreeMap<usize, u64>) {
    let p = h.p();
    let pairs: Vec<SimplePair> = h.simple_pairs().collect();
    let mut hist = BTreeMap::new();
    let mut total = 0u64;
    for seq in (0..p).permutations(p) {
        let pi = VertexOrdering::from_sequence(seq).expect("permutation");
        *hist.entry(count_separated_among(h, &pairs, &pi)).or_insert(0) += 1;
        total += 1;
    }
    (total, hist)
}

/// Summary of separated-pair counts over random orderings.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationStats {
    pub trials: u64,
    /// `k -> number of trials that separated exactly k pairs`.
    pub histogram: BTreeMap<usize, u64>,
    /// Sample mean of the separated count (estimate).
    pub mean_separated: f64,
    /// Fraction of trials separating no pair (estimate).
    pub success_rate: f64,
    pub m2: u64,
    /// `m2 / bound(n)`, the exact expectation of the separated count.
    pub expected_mean: BigRational,
    /// Standard deviation of the sample mean when the `m2` separation events
    /// are treated as independent Bernoulli trials: `sqrt(m2·q(1-q) / trials)`
    /// with `q = 1 / bound(n)`.
    pub sigma_mean: f64,
}

impl SeparationStats {
    fn from_histogram(h: &Hypergraph, trials: u64, histogram: BTreeMap<usize, u64>) -> Self {
        let sum: u64 = histogram.iter().map(|(&k, &f)| k as u64 * f).sum();
        let zero = histogram.get(&0).copied().unwrap_or(0);
        let m2 = m2(h);
        let b = BigInt::from(bound(h.n()));
        let expected_mean = BigRational::new(BigInt::from(m2), b.clone());
        let q = 1.0 / b.to_f64().unwrap_or(f64::INFINITY);
        let sigma_mean = (m2 as f64 * q * (1.0 - q) / trials as f64).sqrt();
        SeparationStats {
            trials,
            mean_separated: sum as f64 / trials as f64,
            success_rate: zero as f64 / trials as f64,
            histogram,
            m2,
            expected_mean,
            sigma_mean,
        }
    }

    /// The sample mean as an exact rational.
    pub fn mean_exact(&self) -> BigRational {
        if self.trials == 0 {
            return BigRational::zero();
        }
        let sum: u64 = self.histogram.iter().map(|(&k, &f)| k as u64 * f).sum();
        BigRational::new(BigInt::from(sum), BigInt::from(self.trials))
    }

    /// `(sample mean - expected mean) / sigma_mean`, or `None` when sigma is zero.
    pub fn deviation_sigmas(&self) -> Option<f64> {
        let expected = self.expected_mean.to_f64()?;
        (self.sigma_mean > 0.0).then(|| (self.mean_separated - expected) / self.sigma_mean)
    }
}

/// Samples `trials` orderings (trial `t` from stream `t` of `seed`) and records
/// how many simple pairs each one separates.
pub fn monte_carlo_separation(h: &Hypergraph, trials: u64, seed: u64) -> SeparationStats {
    let pairs: Vec<SimplePair> = h.simple_pairs().collect();
    let histogram = (0..trials)
        .into_par_iter()
        .fold(BTreeMap::new, |mut hist, t| {
            let pi = VertexOrdering::seeded(h.p(), seed, t);
            *hist.entry(count_separated_among(h, &pairs, &pi)).or_insert(0u64) += 1;
            hist
        })
        .reduce(BTreeMap::new, merge_histograms);
    SeparationStats::from_histogram(h, trials, histogram)
}

fn merge_histograms(mut a: BTreeMap<usize, u64>, b: BTreeMap<usize, u64>) -> BTreeMap<usize, u64> {
    for (k, f) in b {
        *a.entry(k).or_insert(0) += f;
    }
    a
}
