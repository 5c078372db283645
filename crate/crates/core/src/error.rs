use thiserror::Error;

/// Errors raised by the engine. Every fallible operation returns this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix has non-integral entries: {0}")]
    NonIntegral(String),
    #[error("determinant must be positive, got {0}")]
    NonPositiveDeterminant(String),
    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("coset enumeration exceeded the cap of {cap} cosets")]
    CapExceeded { cap: usize },
    #[error("{0} is not an element of the group")]
    NotInGroup(String),
    #[error("operands belong to different groups: {0} vs {1}")]
    GroupMismatch(String, String),
    #[error("{0} does not lie in the expected double coset")]
    NotInCoset(String),
    #[error("function domains do not match: {0}")]
    DomainMismatch(String),
    #[error("determinant {det} is not coprime to the level {level}")]
    BadDeterminant { det: String, level: u64 },
    #[error("curve has bad reduction at {0}")]
    BadReduction(u64),
    #[error("coefficient action undefined for {0}")]
    ActionUndefined(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
