//! Error types shared across the crate.

use thiserror::Error;

/// Unified error type for table analysis, posterior updating, simulation,
/// and batch-pipeline input handling.
#[derive(Error, Debug)]
pub enum Error {
    /// A cell count is negative, non-finite, or the table is empty.
    #[error("invalid table: {reason}")]
    InvalidTable { reason: String },

    /// A margin proportion sits on the boundary (0 or 1), so the log odds
    /// ratio and its variance are undefined. Apply the half-count correction
    /// first if this is expected (zero cells).
    #[error(
        "degenerate table: p={p_hat}, q={q_hat}, w={w_hat} must all lie strictly inside (0,1); \
         apply the half-count correction for zero cells"
    )]
    DegenerateTable { p_hat: f64, q_hat: f64, w_hat: f64 },

    /// |log OR| is at or past the point where the normalized effect stops
    /// being monotone, so the T statistic's denominator is no longer positive.
    #[error("log odds ratio {log_or} outside the monotone range (|x| < {limit})")]
    OutOfMonotoneRange { log_or: f64, limit: f64 },

    /// A credible/confidence level outside the open unit interval.
    #[error("invalid level {level}: must lie strictly inside (0,1)")]
    InvalidLevel { level: f64 },

    /// A prior specification with nonpositive scale or truncation parameters,
    /// or an otherwise unusable discrete distribution.
    #[error("invalid prior specification: {reason}")]
    InvalidSpec { reason: String },

    /// Every likelihood term underflowed to zero, so the posterior is
    /// undefined. `index` reports the offending step in a sequential chain.
    #[error("all likelihood terms are zero at update step {index:?}: widen the prior support")]
    AllZeroLikelihood { index: Option<usize> },

    /// Scale bookkeeping mismatch, e.g. undressing a posterior that is not on
    /// the noncentrality scale.
    #[error("posterior is on the {found} scale, expected {expected}")]
    ScaleMismatch { expected: &'static str, found: &'static str },

    /// Simulated exposure probabilities left the open unit interval.
    #[error("invalid nuisance parameters: p={p}, q={q} must lie strictly inside (0,1)")]
    InvalidNuisance { p: f64, q: f64 },

    /// A simulation configuration that fails its own invariants.
    #[error("invalid simulation config: {reason}")]
    InvalidConfig { reason: String },

    /// The logistic likelihood is unbounded (perfectly separated data).
    #[error("perfect separation detected in logistic fit (diverging slope)")]
    SeparationDetected,

    /// Iteratively reweighted least squares failed to reach the gradient
    /// tolerance within the iteration budget.
    #[error("logistic fit did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    /// Malformed input data with the 1-based line it came from.
    #[error("parse error at line {line}: {reason}")]
    ParseError { line: usize, reason: String },

    /// Two records share one (year, item_i, item_j) key.
    #[error("duplicate record for year {year}, pair ({item_i},{item_j}) at line {line}")]
    DuplicateKey { line: usize, year: i32, item_i: u32, item_j: u32 },

    /// A negative cell count in an input file.
    #[error("negative count at line {line}: {reason}")]
    NegativeCount { line: usize, reason: String },

    /// An underlying I/O failure.
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
