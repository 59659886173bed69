use thiserror::Error;

/// Errors raised by the field, ring, CRT, code and experiment layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands belong to different field contexts")]
    ContextMismatch,
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("modulus is not irreducible over GF({p})")]
    ReducibleModulus { p: u64 },
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("subfield degree {d} does not divide the extension degree {m}")]
    NotADivisor { d: usize, m: usize },
    #[error("the basis is not linearly independent over GF(q)")]
    DependentBasis,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("modulus {index} is not monic or has q-degree zero")]
    InvalidModulus { index: usize },
    #[error("the modulus family is empty")]
    EmptyFamily,
    #[error("modulus {index} is not coprime with the left lcm of its predecessors")]
    ChainNotCoprime { index: usize },
    #[error("moduli are not coprime")]
    NotCoprime,
    #[error("expected {expected} items, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("residue {index} has q-degree {qdeg}, bound is {bound}")]
    ResidueTooLarge { index: usize, qdeg: usize, bound: usize },
    #[error("message q-degree {qdeg} is not below k = {k}")]
    MessageTooLarge { qdeg: usize, k: usize },
    #[error("invalid code parameters: {0}")]
    InvalidParams(String),
    #[error("rank {r} outside 0..={max}")]
    RankOutOfRange { r: usize, max: usize },
    #[error("invalid block partition: {0}")]
    BadPartition(String),
    #[error("decoding radius {r_max} exceeds the admissible bound {limit}")]
    RadiusOutOfRange { r_max: usize, limit: usize },
    #[error("no chain-coprime family found after {attempts} attempts")]
    FamilySearchExhausted { attempts: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

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

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
