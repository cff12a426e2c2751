use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate evaluation point: {0}")]
    Degenerate(String),
    #[error("odd number of boundary points ({0})")]
    Parity(usize),
    #[error("width mismatch: {0}")]
    Width(String),
    #[error("boundary signature mismatch: {0}")]
    Signature(String),
    #[error("tangle is not closed: {0} open endpoints")]
    NotClosed(usize),
    #[error("zero tensor")]
    ZeroTensor,
    #[error("indicator undefined: {0}")]
    Undefined(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
