use thiserror::Error;

/// Errors shared across the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no inverse: {a} has no inverse modulo {modulus}")]
    NoInverse { a: u64, modulus: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("key error: {0}")]
    Key(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("lift inversion failed: no candidate in [1, p-1] within p iterations")]
    InversionFailure,

    #[error("infeasible lifting dimension: q = {q} below the minimal dimension {minimal}")]
    InfeasibleDimension { q: u64, minimal: u64 },

    #[error("companion matrix has repeated eigenvalues; not diagonalizable")]
    NonDiagonalizable,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("recovery failed: {0}")]
    RecoveryFailure(String),

    #[error("spectrum contains no non-real eigenvalue; cannot recover the exponent")]
    InsufficientSpectrum,

    #[error("degenerate transformed coordinate at the -1 eigenvalue")]
    DegenerateCoordinate,

    #[error("rank-deficient data matrix (rank {rank} < {rows} rows); reduce q via minimal_dimension")]
    RankDeficient { rank: usize, rows: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
