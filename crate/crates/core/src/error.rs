use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomials live in different rings ({left} vs {right})")]
    RingMismatch { left: String, right: String },

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("no image given for variable `{0}`")]
    MissingImage(String),

    #[error("index out of range: {0}")]
    BadIndex(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("elements belong to models with different n ({left} vs {right})")]
    ModelMismatch { left: usize, right: usize },

    #[error("element is not in the span of the degree-{degree} basis")]
    NotInSpan { degree: u32 },

    #[error("not a polynomial in the squares w_(2i)^2: {0}")]
    NotSquares(String),

    #[error("pair model dimension check failed for n={n}, d={degree}: {found} basis elements, expected {expected}")]
    ModelDimension {
        n: usize,
        degree: u32,
        found: usize,
        expected: usize,
    },

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
