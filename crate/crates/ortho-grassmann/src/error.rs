use thiserror::Error;

/// Library-wide error type.
///
/// Contract violations (bad shapes, unmet preconditions, infeasible
/// parameters) are reported as errors; internal cross-check failures between
/// two algebraically equivalent routes panic instead, since they indicate an
/// implementation bug rather than bad input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is singular")]
    Singular,

    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),

    #[error("subspace dimensions incompatible: {0}")]
    DimensionMismatch(String),

    #[error("span of an all-zero generating set")]
    EmptySpan,

    #[error("{child} is not contained in {parent}")]
    NotContained { child: String, parent: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("search budget exhausted: {0}")]
    SearchExhausted(String),

    #[error("witness family exhausted before reaching the requested count: {0}")]
    WitnessesExhausted(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("vertex not in universe")]
    VertexNotInUniverse,

    #[error("duplicate vertex in universe")]
    DuplicateVertex,

    #[error("cannot certify geodesic length for these endpoints: {0}")]
    CannotCertifyGeodesic(String),

    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
