use crate::analysis::Side;

/// Unified error type for every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a digraph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("arc ({tail}, {head}) references a vertex outside 0..{n}")]
    ArcOutOfRange { tail: usize, head: usize, n: usize },

    #[error("a digraph must have at least one vertex")]
    EmptyVertexSet,

    #[error("operation requires at least one arc")]
    EmptyArcSet,

    #[error("invalid arc id {arc}: digraph has {m} arcs")]
    InvalidArcId { arc: usize, m: usize },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("pattern entries must have length n*n: n = {n}, got {len}")]
    BadEntryCount { n: usize, len: usize },

    #[error("not well formed: zero row or zero column at {offenders:?}")]
    NotWellFormed { offenders: Vec<usize> },

    #[error(
        "not degree-balanced: vertex {vertex} has invalency {invalency} and outvalency {outvalency}"
    )]
    NotDegreeBalanced {
        vertex: usize,
        invalency: usize,
        outvalency: usize,
    },

    #[error("digraph is not strongly connected")]
    NotStronglyConnected,

    #[error("digraph has parallel arcs")]
    ParallelArcs,

    #[error("not specular: {side} {first} and {second} overlap without being equal")]
    NotSpecular {
        side: Side,
        first: usize,
        second: usize,
    },

    #[error("specular block with rows {rows:?} and columns {cols:?} is not square")]
    NonSquareBlock { rows: Vec<usize>, cols: Vec<usize> },

    #[error("subset search undecided: an overlap component has {size} members, cap is {cap}")]
    SearchCapExceeded { size: usize, cap: usize },

    #[error("permutation-equivalence search supports sizes up to {limit}, got {n}")]
    EquivalenceLimitExceeded { n: usize, limit: usize },

    #[error("matrix is numerically rank-deficient")]
    RankDeficient,

    #[error("permutation image is not a bijection on 0..{n}")]
    InvalidPermutation { n: usize },

    #[error("coin for degree {degree} is invalid: {reason}")]
    InvalidCoin { degree: usize, reason: String },

    #[error("{family} requires {requirement}, got n = {n}")]
    UnsupportedFamilySize {
        family: &'static str,
        requirement: &'static str,
        n: usize,
    },

    #[error("invalid parameters: {reason}")]
    InvalidParams { reason: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("census invariant violated: {details}")]
    InvariantBreach { details: String },
}

pub type Result<T> = std::result::Result<T, Error>;
