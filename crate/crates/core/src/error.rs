use crate::grid::MultiIndex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid multi-index {0:?}: every level must be at least 1")]
    InvalidMultiIndex(Vec<u32>),

    #[error("sparse level {level} is below the dimension {dim}")]
    LevelTooSmall { level: u32, dim: usize },

    #[error("unsupported dimension {0}; expected 1..=4")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point {0:?} lies outside the unit hypercube")]
    OutsideDomain(Vec<f64>),

    #[error("the heat operator needs a time axis and at least one spatial axis (dimension {0})")]
    UnsupportedOperator(usize),

    #[error("collocation matrix is exactly singular at pivot {pivot}")]
    Singular { pivot: usize },

    #[error("collocation system for subgrid {index} failed: {source}")]
    Subgrid {
        index: MultiIndex,
        #[source]
        source: Box<Error>,
    },

    #[error("solution contains non-finite values")]
    NonFinite,

    #[error("extrapolation undefined: {0}")]
    Extrapolation(&'static str),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("problem `{0}` has no exact solution to measure errors against")]
    NoExactSolution(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed report table at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
