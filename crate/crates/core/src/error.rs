use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed tree diagram: {0}")]
    MalformedDiagram(String),

    #[error("capacity exceeded: {what} (limit {limit})")]
    CapacityExceeded { what: &'static str, limit: usize },

    #[error("parse error at offset {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },

    #[error("invalid dyadic rational: {0}")]
    InvalidDyadic(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
