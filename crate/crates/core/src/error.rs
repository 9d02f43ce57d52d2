use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("operator coefficient has a pole at the origin")]
    PoleAtOrigin,
    #[error("ideal is not zero-dimensional")]
    NotZeroDimensional,
    #[error("all generators are zero")]
    ZeroIdeal,
    #[error("derivative degree cap {cap} exceeded during Groebner basis computation")]
    DegreeCapExceeded { cap: u32 },
    #[error("ideal is not in normal position: ord(P) = {order} < {rank} = dim")]
    NotNormalPosition { order: usize, rank: usize },
    #[error("no shear in normal position found after {attempts} attempts")]
    NormalizationFailed { attempts: usize },
    #[error("no cyclic vector found after {attempts} attempts")]
    CyclicVectorNotFound { attempts: usize },
    #[error("operator is not a cyclic vector: Krylov family has rank {rank} < {dim}")]
    NotCyclic { rank: usize, dim: usize },
    #[error("origin is not an ordinary point: normal-form coordinate has a pole at 0")]
    NonOrdinaryOrigin,
    #[error("truncation order too small: {0}")]
    TruncationTooSmall(String),
    #[error("operators live in different algebras ({0} vs {1} y-variables)")]
    NvarsMismatch(usize, usize),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown variable `{name}` at line {line}, column {column} (nvars = {nvars})")]
    Arity {
        name: String,
        nvars: usize,
        line: usize,
        column: usize,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
