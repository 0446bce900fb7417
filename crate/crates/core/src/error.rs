use thiserror::Error;

/// Position-tagged failure from the expression parser.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("generator e{generator} is outside level {level}")]
    LevelOutOfRange { generator: usize, level: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("inclusion matrix is disconnected")]
    Disconnected,
    #[error("inclusion matrix is zero")]
    ZeroMatrix,
    #[error("invalid inclusion: {0}")]
    InvalidInclusion(String),
    #[error("trace not Markov: {0}")]
    NotMarkov(String),
    #[error("trace is not faithful")]
    NotFaithful,
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("not a module: {0}")]
    NotModule(String),
    #[error("operator is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("set is not closed under multiplication")]
    NotAnAlgebra,
    #[error("incompatible inputs: {0}")]
    Incompatible(String),
    #[error("model violation: {0}")]
    ModelViolation(String),
    #[error("tower depth {have} is too small, {required} required")]
    DepthInsufficient { required: usize, have: usize },
    #[error("dimension {required} exceeds cap {cap}")]
    CapExceeded { required: usize, cap: usize },
    #[error("config error at line {line}, column {col}: {msg}")]
    Config { line: usize, col: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
