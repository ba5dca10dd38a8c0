//! Crate-wide error type.

use alloc::string::String;

/// Errors produced by construction, composition and fitting routines.
///
/// Every variant carries enough context to identify the offending quantity
/// without a backtrace; numerical routines that fail to converge return the
/// last iterate inside the error so callers can inspect it.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// A square matrix was required.
    #[error("{context}: matrix is {rows}x{cols}, expected square")]
    NotSquare {
        context: &'static str,
        rows: usize,
        cols: usize,
    },

    /// A tensor-factor label was not found in the Hilbert space.
    #[error("unknown factor label `{label}`")]
    UnknownLabel { label: String },

    /// A factor label occurs twice in one Hilbert space.
    #[error("duplicate factor label `{label}`")]
    DuplicateLabel { label: String },

    /// A state or channel failed a structural invariant (hermiticity,
    /// trace normalization, positivity, Kraus sum bound, ...).
    #[error("invariant violated: {what} (deviation {deviation:.3e})")]
    InvariantViolated { what: &'static str, deviation: f64 },

    /// A physical parameter is outside its admissible range.
    #[error("invalid parameter {name}: {message}")]
    InvalidParameter {
        name: &'static str,
        message: String,
    },

    /// An iterative solver exhausted its iteration budget.
    ///
    /// `last` holds the final iterate (solver-specific meaning) and
    /// `residual` the figure of merit at that point.
    #[error("{solver} did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        solver: &'static str,
        iterations: usize,
        residual: f64,
        last: alloc::vec::Vec<f64>,
    },

    /// Input data are structurally unusable (empty series, empty column, ...).
    #[error("bad input data: {0}")]
    BadData(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
