//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong while parsing, validating or analysing a graph.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input text. Position is 1-based.
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    /// An edge refers to a vertex that was never declared.
    #[error("edge `{edge}` refers to undeclared vertex `{vertex}`")]
    DanglingEndpoint { edge: String, vertex: String },

    /// The same identifier was declared twice.
    #[error("duplicate identifier `{id}`")]
    DuplicateIdentifier { id: String },

    /// The graph is not connected (every graph here must be a continuum).
    #[error("graph is not connected")]
    Disconnected,

    /// The graph has no edges; a single point is not an interesting continuum.
    #[error("graph has no edges")]
    NoEdges,

    /// A point reference does not belong to the graph it is used with.
    #[error("point {point} is not a point of this graph")]
    UnknownPoint { point: String },

    /// An interior point parameter is outside the open interval (0, 1).
    #[error("edge parameter {t} of edge `{edge}` is not strictly between 0 and 1")]
    ParameterOutOfRange { edge: String, t: String },

    /// The operation needs an end point (order 1) and got something else.
    #[error("point {point} is not an end point")]
    NotAnEndpoint { point: String },

    /// The operation needs an ordinary point (order 2) and got something else.
    #[error("point {point} is not an ordinary point")]
    NotOrdinary { point: String },

    /// The operation is undefined on a graph that is a simple closed curve.
    #[error("operation undefined on a circle")]
    CircleGraph,

    /// The operation is undefined on a graph that is an arc.
    #[error("operation undefined on an arc")]
    ArcGraph,

    /// A subcontinuum representation violates one of its structural rules.
    #[error("invalid subcontinuum: {0}")]
    InvalidSubcontinuum(String),

    /// A subcontinuum was expected to contain a point but does not.
    #[error("point {point} does not belong to the subcontinuum")]
    PointNotInSubcontinuum { point: String },

    /// A search cap was hit before the computation finished.
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    /// An internal consistency check failed; this is a bug, not bad input.
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    /// A family parameter is outside the range the family is defined for.
    #[error("family `{family}` is not defined for parameter {param}")]
    FamilyParameter { family: String, param: String },
}

pub type Result<T> = std::result::Result<T, Error>;
