//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("vector must have at least one coordinate")]
    EmptyVector,

    #[error("non-finite coordinate at index {index}: {value}")]
    NonFinite { index: usize, value: f64 },

    #[error("alpha {alpha} outside [0, 1]")]
    AlphaOutOfRange { alpha: f64 },

    #[error("scale factor {factor} must be nonnegative")]
    NegativeScale { factor: f64 },

    #[error("coordinate {index} = {value} outside domain [{lo}, {hi}]")]
    OutOfDomain {
        index: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("point within finite-difference step {h} of the domain boundary at coordinate {index}")]
    TooCloseToBoundary { index: usize, h: f64 },

    #[error("gradient of `{name}` undefined inside ball of radius {radius} at the origin")]
    GradientUndefined { name: String, radius: f64 },

    #[error("condition {cond} requires an alpha argument")]
    MissingAlpha { cond: String },

    #[error("condition {cond} requires L > 0, got {l}")]
    NonPositiveL { cond: String, l: f64 },

    #[error("{skipped} of {total} samples skipped (more than half); sampling configuration unusable")]
    TooManySkipped { skipped: usize, total: usize },

    #[error("all sampled pairs were skipped; cannot estimate L")]
    AllPairsSkipped,

    #[error("invalid bisection bracket ({lo}, {hi}): {reason}")]
    InvalidBracket { lo: f64, hi: f64, reason: String },

    #[error("instance does not satisfy the Lipschitz precondition; chain gap inapplicable")]
    InapplicableInstance,

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
