use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A physical or numerical parameter is outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown material `{0}`")]
    UnknownMaterial(String),

    /// Grid too small for the stencil that is being built.
    #[error("grid size error: {0}")]
    Size(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("singular matrix: zero pivot at row {row}")]
    Singular { row: usize },

    /// Closed-form expression evaluated at a parameter point where it has no value.
    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("rate estimation: {0}")]
    Estimation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
