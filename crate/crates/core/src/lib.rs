//! Property B (2-colorability) analysis for `n`-uniform hypergraphs.
//!
//! * [`hypercore`]: the [`Hypergraph`] type, simple pairs, `m2`, the lower
//!   bound `n · C(2n-1, n)` and standard constructions.
//! * [`coloring`]: greedy coloring along a vertex ordering, properness
//!   checks, the exhaustive decider and random restarts.
//! * [`separation`]: the separation predicate, exact probabilities and Monte
//!   Carlo statistics.
//! * [`setpairs`]: set-pair families, the two-families inequality and clique
//!   detection.
//! * [`search`]: exhaustive and sampled verification at small sizes.

pub mod coloring;
pub mod error;
pub mod hypercore;
pub mod search;
pub mod separation;
pub mod setpairs;

pub use coloring::{
    exhaustive_decide, is_proper, pluhar_color, random_restart_color, Color, Colorability, Coloring,
    ColoringOutcome, Verdict, VertexOrdering,
};
pub use error::{Error, Result};
pub use hypercore::{
    analyze, bound, complete_hypergraph, enumerate_simple_pairs, fano_plane, m2, normalize, pad,
    random_hypergraph, seymour_check, AnalysisReport, Hypergraph, SimplePair, Vertex,
};
pub use search::{SearchOutcome, SearchRecord};
pub use separation::{
    count_separated, enumerate_separation_probability, exact_separation_probability, monte_carlo_separation,
    separates, SeparationStats,
};
pub use setpairs::{
    bollobas_family, bollobas_sum, bollobas_verdict, build_m, check_conditions, detect_equality_structure,
    find_clique, BollobasVerdict, SetPairFamily,
};

pub use num_bigint::BigUint;
pub use num_rational::BigRational;
