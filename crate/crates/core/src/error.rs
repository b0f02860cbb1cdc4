use thiserror::Error;

/// Errors raised by grid construction, transforms, norms, solves and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("shape mismatch: expected {expected} samples, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("grids differ")]
    GridMismatch,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("band {j} outside the active range [{j_min}, {j_max}]")]
    BandOutOfRange { j: i32, j_min: i32, j_max: i32 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("symbol is singular at zero frequency")]
    SingularSymbol,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("grid too coarse: {0}")]
    Unresolved(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
