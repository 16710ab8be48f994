use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),

    #[error("prime {p} is too large for a residue table (limit {limit})")]
    PrimeTooLarge { p: u64, limit: u64 },

    #[error("{x} has no inverse modulo {p}")]
    DivisionByZero { x: i64, p: u64 },

    #[error("degenerate chirp: {p} divides r = {r}")]
    DegenerateChirp { p: u64, r: i64 },

    #[error("sample {index} has modulus {modulus}, expected 1")]
    NotUnimodular { index: usize, modulus: f64 },

    #[error("shift {m} is out of range for length {len}")]
    ShiftOutOfRange { m: usize, len: usize },

    #[error("ambiguity table for p = {p} exceeds the cap of {cap}")]
    TableTooLarge { p: u64, cap: u64 },

    #[error("(m, n) = ({m}, {n}) must both be nonzero modulo {p}")]
    OutOfDomain { m: i64, n: i64, p: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid range {lo}:{hi}")]
    InvalidRange { lo: u64, hi: u64 },

    /// A numerically checked mathematical property failed. Signals a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}
