use thiserror::Error;

#[derive(Debug, Error)]
pub enum AmbigError {
    #[error("invalid array: {0}")]
    InvalidArray(String),

    #[error("angle out of domain: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("vanishing-sum catalog does not reach length {0}")]
    CatalogExhausted(usize),

    #[error("catalog parse error on line {line}: {message}")]
    CatalogParse { line: usize, message: String },

    #[error("oracle budget exceeded: {0}")]
    OracleBudget(String),

    #[error("verification tripwire: {0}")]
    Verification(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, AmbigError>;
