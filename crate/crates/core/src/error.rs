use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed arguments: wrong dimension, negative time, bad parameters.
    #[error("invalid input: {0}")]
    Input(String),

    /// A symbol produced a non-Hermitian test matrix.
    #[error("symbol integrity violated: {0}")]
    SymbolIntegrity(String),

    /// The requested derivative or feature is not provided analytically.
    #[error("unsupported: {0}")]
    Capability(String),

    /// The symbol has not decayed at the frequency cutoff.
    #[error("frequency grid too small: |exp(-b)| = {boundary:.3e} at the cutoff exceeds {tol:.3e}")]
    GridTooSmall { boundary: f64, tol: f64 },

    /// A numerical result missed its accuracy contract.
    #[error("accuracy contract missed: {what} = {value:.3e} exceeds {limit:.3e}")]
    Accuracy { what: String, value: f64, limit: f64 },

    /// A check was requested whose preconditions make it meaningless.
    #[error("contract violated: {0}")]
    Contract(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
