use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown coordinate {0}")]
    UnknownCoordinate(String),

    #[error("operands belong to different bundles")]
    BundleMismatch,

    #[error("invalid bundle: {0}")]
    InvalidBundle(String),

    #[error("element is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("expected an element of degree {expected}, got degree {got}")]
    WrongDegree { expected: u32, got: u32 },

    #[error("expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("argument {index} is not a section: {element}")]
    NotSection { index: usize, element: String },

    #[error("argument {index} must have degree at least 1")]
    DegreeZeroArgument { index: usize },

    #[error("not a multivector: {0}")]
    NotMultivector(String),

    #[error("{0}")]
    Domain(String),

    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("index out of range: `{token}` at {position}")]
    IndexOutOfRange { token: String, position: usize },

    #[error("malformed table: {0}")]
    MalformedTable(String),

    #[error("inconsistent table: {relation} leaves residual {residual}")]
    InconsistentTable { relation: String, residual: String },

    #[error("underdetermined reconstruction: coefficient of {free} is not fixed by the table")]
    Underdetermined { free: String },

    #[error("tensor is not antisymmetric at indices {0:?}")]
    NotAntisymmetric(Vec<usize>),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
