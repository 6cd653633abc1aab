use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the formula it feeds.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported spectrum model: {0}")]
    UnsupportedModel(&'static str),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("adaptive quadrature on [{a}, {b}] did not converge within depth {max_depth}")]
    NonConvergence { a: f64, b: f64, max_depth: u32 },

    #[error("spectrum integrates to zero on [{a}, {b}]")]
    ZeroDenominator { a: f64, b: f64 },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("simplex exceeded the iteration limit of {limit} pivots")]
    IterationLimit { limit: usize },

    #[error("invalid linear program: {0}")]
    InvalidProblem(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
