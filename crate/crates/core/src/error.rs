use thiserror::Error;

/// Failures raised by the numeric kernels and representation builders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Parameters outside the admissible region (q <= 0, q ~ 1, non-finite input, ...).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A scalar function was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// `a^dagger a` has a negative eigenvalue on the evaluation window.
    #[error("non-unitary representation: lambda({n}) = {lambda} < 0")]
    NonUnitary { n: i64, lambda: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
