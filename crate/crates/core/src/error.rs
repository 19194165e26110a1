use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid grading (s={s}, r={r}): weights must be positive and coprime")]
    InvalidGrading { s: u32, r: u32 },

    #[error("polynomial is not homogeneous for the given grading")]
    NotHomogeneous,

    #[error("polynomial is not quasihomogeneous: {0}")]
    NotQuasihomogeneous(String),

    #[error("abelianization is not square-free: {0}")]
    NotSquareFree(String),

    #[error("abelianization has a square monomial factor x^{u} y^{v}")]
    SquarePart { u: u32, v: u32 },

    #[error("exponents do not fit the quasihomogeneous grid")]
    ShapeMismatch,

    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("constant polynomial is not allowed here")]
    ConstantPolynomial,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("scaling constant must be nonzero")]
    ZeroScale,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("element is not in the span of L2 generators")]
    NotInL2,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("degree limit exceeded: {0}")]
    DegreeLimit(String),

    #[error("certificate failure: {0}")]
    Certificate(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
