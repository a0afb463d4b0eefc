use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid cyclic factor order {0}: every factor must have order at least 2")]
    InvalidOrder(u64),
    #[error("empty factor list")]
    EmptyGroup,
    #[error("cannot parse group spec {spec:?}: {reason}")]
    GroupParse { spec: String, reason: String },
    #[error("element does not belong to {group}")]
    GroupMismatch { group: String },
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    #[error("{0} is not prime")]
    InvalidPrime(u64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("bound direction error: {0}")]
    Direction(String),
    #[error("incomplete input: {0}")]
    IncompleteInput(String),
    #[error("Property D is only defined for homocyclic groups (Z_k)^n, got {0}")]
    NotHomocyclic(String),
    #[error("group {0} is too large to enumerate")]
    TooLarge(String),
    #[error("oracle refuses input: {0}")]
    OracleScale(String),
    #[error("line {line}: {reason}")]
    SequenceParse { line: usize, reason: String },
    #[error("certificate replay mismatch in rule {rule}: stored {stored}, recomputed {recomputed}")]
    Replay {
        rule: String,
        stored: String,
        recomputed: String,
    },
    #[error("cache error: {0}")]
    Cache(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
