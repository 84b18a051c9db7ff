use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("entry buffer has {got} elements, expected {rows}x{cols}")]
    Shape {
        rows: usize,
        cols: usize,
        got: usize,
    },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix of size {size} does not match subsystem dimensions {dim_a}x{dim_b}")]
    DimensionMismatch {
        size: usize,
        dim_a: usize,
        dim_b: usize,
    },

    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is {re} + {im}i, expected 1")]
    Trace { re: f64, im: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("{name} = {value} is outside the valid range [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("state is outside the SPA-R domain: {0}")]
    Domain(String),

    #[error("moment sign test reports an indefinite spectrum but the lower bound is nonnegative ({lower_bound:e})")]
    DomainInconsistent { lower_bound: f64 },

    #[error("invalid moment-estimation input: {0}")]
    Estimation(String),

    #[error("invalid state file: {0}")]
    StateFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
