use thiserror::Error;

use crate::graphlin::SubspaceBasis;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// The iterative solver ran out of iterations. The last iterate is kept so
    /// callers that can live with an unconverged subspace may still use it.
    #[error("solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    Convergence {
        iterations: usize,
        residual: f64,
        last: Option<Box<SubspaceBasis>>,
    },

    #[error("partition failure: {0}")]
    PartitionFailure(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
