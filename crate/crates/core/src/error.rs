use thiserror::Error;

use crate::cycle::NondegeneracyFailure;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid column subset: {0}")]
    InvalidTheta(String),
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("row {row} has an entry not divisible by {p}")]
    NotDivisible { row: usize, p: u64 },
    #[error("matrix is singular")]
    Singular,
    #[error("vector is not primitive")]
    NotPrimitive,
    #[error("invalid edge: {0}")]
    InvalidEdge(String),
    #[error("invalid cone: {0}")]
    InvalidCone(String),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("edges {0} and {1} share no cone")]
    NotAdjacent(String, String),
    #[error("matrix is already good on every cone")]
    AlreadyGood,
    #[error("matrix is not good on cone {0}; run resolve() first")]
    NotGood(String),
    #[error("resolution exceeded its safety cap of {cap} blow-ups (pair {pair:?}); this is a bug")]
    ResolutionDiverged { cap: usize, pair: (usize, usize) },
    #[error("matrix is confluent: the all-ones vector is not a primitive vector of its row lattice")]
    Confluent,
    #[error("matrix is not sub-non-confluent: its hat has rank below the row count")]
    NotSubNonConfluent,
    #[error("the character component chi_0 is trivial")]
    TrivialCharacter0,
    #[error("{0}")]
    Nondegeneracy(Box<NondegeneracyFailure>),
    #[error("square reduction produced a confluent matrix")]
    ReductionLostNonConfluence,
    #[error("invalid multiplicity table: {0}")]
    InvalidMultiplicities(String),
    #[error("cycle carries mixed field tags")]
    MixedFieldTags,
    #[error("cycle is already specialized")]
    AlreadySpecialized,
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("sampling failed: {0}")]
    SamplingFailed(String),
}
