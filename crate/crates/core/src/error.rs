use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid query parameter: {0}")]
    Param(String),

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("undefined reliability context: {0}")]
    UndefinedContext(String),

    #[error("unsupported format version {found} (expected {expected})")]
    Version { found: u16, expected: u16 },

    #[error("bad magic bytes, not a {0} file")]
    Magic(&'static str),

    #[error("checksum mismatch (file truncated or corrupted)")]
    Checksum,

    #[error("corrupt data: {0}")]
    Corrupt(String),

    #[error("delta entry {index}: {msg}")]
    Delta { index: usize, msg: String },

    #[error("dangling virtual node reference {0}")]
    DanglingRef(u32),

    #[error("oracle refused: {0}")]
    OracleGuard(String),

    #[error("metric undefined: {0}")]
    Metric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
