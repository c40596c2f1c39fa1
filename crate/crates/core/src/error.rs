use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("invalid homomorphism: {0}")]
    InvalidHomomorphism(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{what} needs {needed} elements, exceeding the cap of {cap}")]
    CapExceeded {
        what: String,
        needed: usize,
        cap: usize,
    },

    #[error("enumeration exceeded the requested limit of {limit}")]
    LimitExceeded { limit: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("not a subfamily: {0}")]
    NotASubfamily(String),

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    #[error("law violation [{law}]: {witness}")]
    LawViolation { law: String, witness: String },

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("enumeration bound exceeded: {0}")]
    BoundExceeded(String),
}
