use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular")]
    Singular,

    #[error("scale factor must be nonzero")]
    ZeroScale,

    #[error("polynomial division is not exact")]
    InexactDivision,

    #[error("quadratic ring elements come from different (p, q) contexts")]
    ContextMismatch,

    #[error("invalid recurrence: {0}")]
    InvalidSpec(String),

    #[error("cannot evaluate at index {index}: backward extension needs a nonzero last coefficient")]
    NotBackwardExtensible { index: i64 },

    #[error("u_{index} = 0: {hint}")]
    ZeroFundamental { index: i64, hint: &'static str },

    #[error("no zero of u found up to index {searched}: use the non-degenerate relation")]
    NoDegeneracy { searched: i64 },

    #[error("insufficient range: {0}")]
    InsufficientRange(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
