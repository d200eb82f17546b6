use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NonHermitianInput { residual: f64 },

    #[error("{0} did not converge")]
    ConvergenceFailure(&'static str),

    #[error("function undefined at {0}")]
    DomainError(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("subspace is trivial")]
    EmptySubspace,

    #[error("invalid weights (alpha = {alpha}, beta = {beta})")]
    InvalidWeights { alpha: f64, beta: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("dimension {0} is not supported by this routine")]
    UnsupportedDimension(usize),

    #[error("post-check `{check}` failed: {lhs} > {rhs}")]
    PostCheckViolation { check: String, lhs: f64, rhs: f64 },

    #[error("hypothesis `{hypothesis}` violated (residual {residual:.3e})")]
    HypothesisViolated { hypothesis: String, residual: f64 },

    #[error("parse error: {0}")]
    ParseError(String),

    #[error("invalid dimension: {0}")]
    DimensionError(String),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Fails with [`Error::PostCheckViolation`] unless `lhs <= rhs + tol`.
pub(crate) fn ensure_le(check: &str, lhs: f64, rhs: f64, tol: f64) -> Result<()> {
    if lhs <= rhs + tol {
        Ok(())
    } else {
        Err(Error::PostCheckViolation {
            check: check.to_string(),
            lhs,
            rhs,
        })
    }
}
