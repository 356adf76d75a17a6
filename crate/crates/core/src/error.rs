use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates the documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// The conditioning event has (numerically) zero probability.
    #[error("conditioning event has probability {prob:e}, below the 1e-300 floor")]
    ConditioningNull { prob: f64 },

    /// The lifetime model cannot provide what the operation needs (e.g. a density).
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("quadrature did not converge on [{a}, {b}]: error estimate {error:e} after {subdivisions} subdivisions")]
    QuadratureNonconvergence {
        a: f64,
        b: f64,
        error: f64,
        subdivisions: usize,
    },

    /// Problem too large for exhaustive enumeration.
    #[error("size error: {0}")]
    Size(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
