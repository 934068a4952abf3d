use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    CapExceeded { order: String, cap: u64 },

    #[error("{requested} qubits requested, limit is {limit}")]
    TooManyQubits { requested: usize, limit: usize },

    #[error("index {index} out of range for {len} elements")]
    BadIndex { index: usize, len: usize },

    #[error("gate {0} is not a Clifford gate")]
    NonClifford(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("promise violated: extremal value {0}")]
    PromiseViolation(f64),

    #[error("stabilizer description oracle failed")]
    OracleFailure,

    #[error("gave up after {0} attempts")]
    RetriesExhausted(usize),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
