use thiserror::Error;

/// Errors produced by the core engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: u32, right: u32 },

    #[error("digit {digit} out of range for arity {arity}")]
    DigitOutOfRange { digit: u8, arity: u32 },

    #[error("arity must be at least 2, got {0}")]
    InvalidArity(u32),

    #[error("cell depth {depth} exceeds the configured maximum {max}")]
    DepthExceeded { depth: usize, max: usize },

    #[error("{side} cells do not form a complete prefix code: {detail}")]
    IncompletePrefixCode { side: &'static str, detail: String },

    #[error("rule index {index} out of range ({len} rules)")]
    RuleIndexOutOfRange { index: usize, len: usize },

    #[error("address period must be nonempty")]
    EmptyPeriod,

    #[error("partition size {size} is not reachable for arity {arity}: size must be 1 mod {}", arity - 1)]
    InvalidPartitionSize { size: usize, arity: u32 },

    #[error("flip probability must lie in [0, 1]")]
    InvalidProbability,

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
