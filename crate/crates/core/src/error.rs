use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("distribution has no values")]
    Empty,

    #[error("invalid mass {value} at index {index}: values must be finite and nonnegative")]
    InvalidMass { index: usize, value: f64 },

    #[error("degenerate distribution: no positive mass")]
    Degenerate,

    #[error("invalid exponent {0}: p* must be at least 1")]
    InvalidExponent(f64),

    #[error("invalid piecewise config: {0}")]
    InvalidConfig(&'static str),

    #[error("shape mismatch: {left_len} values at offset {left_offset} vs {right_len} values at offset {right_offset}")]
    ShapeMismatch {
        left_offset: i64,
        left_len: usize,
        right_offset: i64,
        right_len: usize,
    },

    #[error("inconsistent evidence: likelihood on the sum excludes every reachable outcome")]
    InconsistentEvidence,

    #[error("convolution tree needs at least one prior")]
    NoPriors,
}
