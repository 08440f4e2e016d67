use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{name} = {value} is out of range ({expected})")]
    Range {
        name: &'static str,
        value: String,
        expected: &'static str,
    },
    #[error("invalid money matrix: {0}")]
    Validation(String),
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("{what} did not converge after {iterations} iterations (last residual {residual:e})")]
    Convergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },
    #[error("leading eigenvalue of the complement block is {0}, expected < 1")]
    Spectral(f64),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn range(
        name: &'static str,
        value: impl core::fmt::Display,
        expected: &'static str,
    ) -> Self {
        Error::Range {
            name,
            value: alloc::format!("{value}"),
            expected,
        }
    }
}
