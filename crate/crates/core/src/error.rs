use thiserror::Error;

use crate::bitset::ElemSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("basis list is empty")]
    EmptyBases,

    #[error("ground set of {0} elements exceeds the supported maximum of 16")]
    TooManyElements(usize),

    #[error("ground set must have at least one element")]
    EmptyGroundSet,

    #[error("element {elem} outside ground set 1..={n}")]
    ElementOutOfRange { elem: usize, n: usize },

    #[error("bases have mixed cardinalities ({expected} and {found})")]
    MixedCardinality { expected: usize, found: usize },

    #[error("basis exchange fails for I={i:?}, J={j:?}, a={a}")]
    ExchangeViolation { i: ElemSet, j: ElemSet, a: usize },

    #[error("basepoint {element} is a loop or coloop")]
    BasepointIsSeparator { element: usize },

    #[error("2-sum requires both matroids to have at least two elements")]
    TwoSumTooSmall,

    #[error("{0:?} is not a circuit-hyperplane")]
    NotCircuitHyperplane(ElemSet),

    #[error("flat {0:?} is empty or meets no basis")]
    FDisjointFromAllBases(ElemSet),

    #[error("generator set {0:?} is dependent")]
    DependentGeneratorSet(ElemSet),

    #[error("step {step}: principal extension needs 1 <= h < {step}, got h={h}")]
    InvalidStep { step: usize, h: usize },

    #[error("lower path rises above upper path at step {0}")]
    PathViolation(usize),

    #[error("lattice paths are malformed: {0}")]
    MalformedPaths(String),

    #[error("unknown atlas name {0:?}")]
    UnknownName(String),

    #[error("graph contains a loop at edge {0}")]
    LoopPresent(usize),

    #[error("graph is not bipartite with the given side")]
    NotBipartite,

    #[error("vertex {vertex} outside 1..={v}")]
    VertexOutOfRange { vertex: usize, v: usize },

    #[error("polynomial product exceeds degree two in a variable")]
    DegreeOverflow,

    #[error("not a probability polynomial: {0}")]
    NotAProbabilityPolynomial(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
