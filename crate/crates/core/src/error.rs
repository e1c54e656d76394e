use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),
    #[error("degree {k} exceeds the exact-coefficient cap of {cap}")]
    DegreeTooLarge { k: u64, cap: u64 },
    #[error("modulus {n} exceeds the brute-force cap of {cap}")]
    CapExceeded { n: u64, cap: u64 },
    #[error("tuple does not give a solvable congruence system")]
    NotInA,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
