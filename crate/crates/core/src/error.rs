use thiserror::Error;

use crate::hypercore::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge {edge} has {len} distinct vertices, expected {expected}")]
    NonUniformEdge {
        edge: usize,
        len: usize,
        expected: usize,
    },

    #[error("edge {edge} references vertex {vertex}, but only {p} vertices exist")]
    VertexOutOfRange { edge: usize, vertex: Vertex, p: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("padding needs {needed} fresh vertices, got {available}")]
    InsufficientVertices { needed: usize, available: usize },

    #[error("requested {requested} edges, but only {available} distinct {n}-subsets exist")]
    TooManyEdges {
        requested: usize,
        available: String,
        n: usize,
    },

    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),

    #[error("coloring assigns {got} vertices, hypergraph has {expected}")]
    IncompleteColoring { got: usize, expected: usize },

    #[error("edges do not form a simple pair (they share {shared} vertices)")]
    NotSimple { shared: usize },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("binomial C({top}, {bottom}) is degenerate for set-pair member {index}")]
    DegenerateBinomial {
        index: usize,
        top: usize,
        bottom: usize,
    },

    #[error("equality structure not applicable: {0}")]
    EqualityNotApplicable(String),

    #[error("set-pair sum equals 1 but the equality structure is absent: {0}")]
    EqualityStructureViolated(String),

    #[error("set-pair family satisfies both conditions but its sum exceeds 1")]
    InequalityViolated,

    #[error("fixture `{fixture}` failed: {assertion}")]
    FixtureFailure { fixture: String, assertion: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
