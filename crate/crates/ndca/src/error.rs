use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("agent id {agent} out of range 1..={n}")]
    AgentOutOfRange { agent: u32, n: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("necklace count overflow for n={n}, k={k}")]
    CountOverflow { n: u32, k: u32 },
    #[error("binomial coefficient C({n},{k}) overflows 64-bit index arithmetic")]
    BinomialOverflow { n: u32, k: u32 },
    #[error("increment array offsets sum to {sum}, expected n - s = {expected}")]
    BadOffsetSum { sum: u32, expected: u32 },
    #[error("empty increment array (all-black necklace) is not allocatable")]
    EmptyIncrementArray,
    #[error("necklace is not canonical or does not start with a white bead")]
    NonCanonicalNecklace,
    #[error("coalition index {idx} out of range 1..={len}")]
    IndexOutOfRange { idx: u64, len: u64 },
    #[error("coalition {{1..s}} is the last element of its list and has no predecessor")]
    NoPredecessor,
    #[error("resource guard: n={n} exceeds the supported limit {limit}")]
    GuardViolation { n: u32, limit: u32 },
    #[error("checksum mismatch across timed runs: {first:#x} vs {other:#x}")]
    ChecksumMismatch { first: u64, other: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
