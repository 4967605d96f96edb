use thiserror::Error;

/// Errors raised by matrix construction, the inverse routines and the
/// instance generators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {op} got {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry count {got} does not match {rows}x{cols}")]
    BadLength { rows: usize, cols: usize, got: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid tolerance: atol={atol}, rtol={rtol}")]
    InvalidTolerance { atol: f64, rtol: f64 },

    #[error("matrix is singular (rank {rank} < {n})")]
    Singular { rank: usize, n: usize },

    #[error("rank(A)={rank}, rank(A^2)={rank_sq}: not group invertible")]
    NotGroupInvertible { rank: usize, rank_sq: usize },

    #[error("rank(A)={rank}, rank(A^2)={rank_sq}: not core invertible")]
    NotCoreInvertible { rank: usize, rank_sq: usize },

    #[error("matrix is not idempotent (residual {residual:e})")]
    NotIdempotent { residual: f64 },

    #[error("matrix is not a projection (residual {residual:e})")]
    NotProjection { residual: f64 },

    /// A sufficient condition of a constructive formula failed. This does
    /// not mean the inverse fails to exist.
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("generation budget of {attempts} attempts exhausted for {family}")]
    GenerationExhausted { family: String, attempts: usize },

    #[error("hypothesis `{hypothesis}` cannot be isolated in family {family}")]
    NotApplicable { family: String, hypothesis: String },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
