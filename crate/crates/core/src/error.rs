use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: expected {expected}, got {got}")]
    InvalidDimension { expected: String, got: usize },

    #[error("matrix is not Hermitian (max |m - m^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NotConverged { sweeps: usize, off_norm: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    BadTrace { trace: f64 },

    #[error("non-finite entry in matrix")]
    NonFinite,

    #[error("{name} = {value} is outside {range}")]
    Domain {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("Kraus set is not trace preserving (max |sum K^H K - I| = {deviation:e})")]
    InvalidChannel { deviation: f64 },

    #[error("state is not an X-state (max off-X entry {deviation:e})")]
    NotXState { deviation: f64 },

    #[error("unknown channel `{0}`")]
    UnknownChannel(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
