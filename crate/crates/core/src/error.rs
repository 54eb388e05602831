use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: vertex index {index} out of range for n = {n}")]
    IndexOutOfRange { line: usize, index: usize, n: usize },

    #[error("line {line}: loop edge at vertex {vertex}")]
    LoopEdge { line: usize, vertex: usize },

    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph is empty")]
    EmptyGraph,

    #[error("{0}-{1} is not an edge")]
    NotAnEdge(usize, usize),

    #[error("graph is not regular")]
    NotRegular,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("size limit exceeded: {size} > {limit}")]
    SizeLimit { size: usize, limit: usize },

    #[error("rational arithmetic overflow")]
    Overflow,

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("idleness {0} outside [0, 1]")]
    IdlenessOutOfRange(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid transport plan: {0}")]
    InvalidPlan(String),

    #[error("supports lie in different components")]
    Unreachable,

    #[error("bipartite sides differ: {left} vs {right}")]
    SideSizesDiffer { left: usize, right: usize },

    #[error("matching is not perfect")]
    NotPerfect,

    #[error("bipartite graph is not regular")]
    BipartiteNotRegular,

    #[error("{0}")]
    Precondition(String),

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    #[error("independent routes disagree: {0}")]
    OracleMismatch(String),

    #[error("certificate check failed: {0}")]
    Certificate(String),
}
