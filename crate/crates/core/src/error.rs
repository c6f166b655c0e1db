use thiserror::Error;

/// Errors raised by the solvers and their supporting routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("sample buffer has length {got}, grid requires {expected}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("spectral input is not Hermitian (deviation {deviation:e})")]
    NonHermitianInput { deviation: f64 },

    #[error("field is not constant in time (deviation {deviation:e})")]
    NotTimeConstant { deviation: f64 },

    #[error("steady forcing has nonzero spatial mean {mean:e} (norm {norm:e})")]
    MeanNotZero { mean: f64, norm: f64 },

    #[error("forcing is not mean-free in time (time mean {mean:e}, norm {norm:e})")]
    NotMeanFree { mean: f64, norm: f64 },

    #[error("odd reflection of data that does not vanish on the wall (max {boundary:e})")]
    OddIncompatible { boundary: f64 },

    #[error("extension trace differs from boundary data (relative {relative:e})")]
    ExtensionTraceMismatch { relative: f64 },

    #[error("Neumann data violate the compatibility condition ({value:e} > {threshold:e})")]
    NeumannIncompatible { value: f64, threshold: f64 },

    #[error("sample grid too coarse for pattern {pattern}: jump {jump:e} vs sup {sup:e}")]
    GridTooCoarse { pattern: String, jump: f64, sup: f64 },

    #[error("exponent violation: {0}")]
    ExponentViolation(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
