use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("{function}: argument {value} outside domain ({expected})")]
    Domain {
        function: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// Structurally invalid input (bad configuration, inconsistent options).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Adaptive quadrature did not reach its tolerance.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error bound {error:e})"
    )]
    NoConvergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    /// A term of a truncated series was not finite.
    #[error("series term k = {k} is not finite")]
    SeriesTerm { k: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(function: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Domain {
        function,
        value,
        expected,
    }
}
