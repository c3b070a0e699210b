use thiserror::Error;

/// Errors raised by the toolkit. Every variant is a validation failure on
/// caller-supplied data; numerical routines themselves never panic.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("entry count {got} does not match shape {rows}x{cols}")]
    ShapeMismatch { rows: usize, cols: usize, got: usize },
    #[error("function undefined at eigenvalue {eigenvalue:.3e}")]
    DomainError { eigenvalue: f64 },
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid stochastic matrix: {0}")]
    InvalidStochastic(String),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("symbol {0:?} has zero probability")]
    ZeroProbSymbol(String),
    #[error("not a valid type with denominator {n}")]
    InvalidType { n: usize },
    #[error("candidate set is empty")]
    EmptySet,
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("state is not bipartite over the declared dimensions")]
    NotBipartite,
    #[error("rank {rank} outside 1..={dim}")]
    BadRank { rank: usize, dim: usize },
    #[error("Kraus operators are not trace preserving (deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },
    #[error("POVM effects do not sum to identity (deviation {deviation:.3e})")]
    IncompleteEffects { deviation: f64 },
    #[error("POVM effect {index} is not positive (min eigenvalue {min_eig:.3e})")]
    NegativeEffect { index: usize, min_eig: f64 },
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("ensemble member {0} is not a pure state")]
    NotPure(usize),
    #[error("expected a two-qubit state")]
    NotTwoQubit,
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("expected a positive value: {0}")]
    NonPositive(String),
    #[error("signal power must be positive")]
    NonPositivePower,
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
