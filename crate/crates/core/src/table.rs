//! 2×2 contingency tables of cases/controls by exposure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 2×2 table of counts:
///
/// ```text
///              exposed   unexposed
///   cases        n11        n12      (row sum: cases())
///   controls     n21        n22      (row sum: controls())
/// ```
///
/// Cells are reals rather than integers so the half-count correction can be
/// represented directly. Derived proportions (`p_hat`, `q_hat`, `w_hat`) are
/// computed on demand from the cells, so they are always consistent with them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoByTwoTable {
    n11: f64,
    n12: f64,
    n21: f64,
    n22: f64,
}

impl TwoByTwoTable {
    /// Builds a table, rejecting negative or non-finite cells.
    ///
    /// The all-zero table is allowed — it only becomes analyzable after
    /// [`haldane_correct`](Self::haldane_correct) — but every analysis
    /// operation rejects it as degenerate until then.
    pub fn new(n11: f64, n12: f64, n21: f64, n22: f64) -> Result<Self> {
        for (name, value) in [("n11", n11), ("n12", n12), ("n21", n21), ("n22", n22)] {
            if !value.is_finite() {
                return Err(Error::InvalidTable { reason: format!("{name} = {value} is not finite") });
            }
            if value < 0.0 {
                return Err(Error::InvalidTable { reason: format!("{name} = {value} is negative") });
            }
        }
        Ok(Self { n11, n12, n21, n22 })
    }

    /// Convenience constructor from integer counts.
    pub fn from_counts(n11: u64, n12: u64, n21: u64, n22: u64) -> Result<Self> {
        Self::new(n11 as f64, n12 as f64, n21 as f64, n22 as f64)
    }

    pub fn n11(&self) -> f64 {
        self.n11
    }

    pub fn n12(&self) -> f64 {
        self.n12
    }

    pub fn n21(&self) -> f64 {
        self.n21
    }

    pub fn n22(&self) -> f64 {
        self.n22
    }

    /// Total sample size N.
    pub fn n(&self) -> f64 {
        self.n11 + self.n12 + self.n21 + self.n22
    }

    /// Number of cases (first row).
    pub fn cases(&self) -> f64 {
        self.n11 + self.n12
    }

    /// Number of controls (second row).
    pub fn controls(&self) -> f64 {
        self.n21 + self.n22
    }

    /// Exposure proportion among cases, p̂ = n11 / (n11 + n12).
    pub fn p_hat(&self) -> f64 {
        self.n11 / self.cases()
    }

    /// Exposure proportion among controls, q̂ = n21 / (n21 + n22).
    pub fn q_hat(&self) -> f64 {
        self.n21 / self.controls()
    }

    /// Case proportion, ŵ = (n11 + n12) / N.
    pub fn w_hat(&self) -> f64 {
        self.cases() / self.n()
    }

    /// Sample log odds ratio, log(n11·n22 / (n12·n21)).
    ///
    /// Infinite or NaN for degenerate tables; callers that need a finite
    /// value should check [`is_degenerate`](Self::is_degenerate) or apply
    /// [`haldane_correct`](Self::haldane_correct) first.
    pub fn log_or(&self) -> f64 {
        (self.n11 * self.n22).ln() - (self.n12 * self.n21).ln()
    }

    /// True when any margin proportion p̂, q̂, ŵ sits on the boundary of
    /// [0, 1] — equivalently, when any cell is zero — so the log odds ratio
    /// is not finite.
    pub fn is_degenerate(&self) -> bool {
        self.n11 == 0.0 || self.n12 == 0.0 || self.n21 == 0.0 || self.n22 == 0.0
    }

    /// Returns a new table with 1/2 added to every cell (the
    /// Haldane–Anscombe correction). Never applied implicitly by any other
    /// operation: correcting is a deliberate analysis step. Applying it twice
    /// adds a full count.
    pub fn haldane_correct(&self) -> Self {
        Self {
            n11: self.n11 + 0.5,
            n12: self.n12 + 0.5,
            n21: self.n21 + 0.5,
            n22: self.n22 + 0.5,
        }
    }

    /// Error describing which margins are degenerate, for operations that
    /// require an interior table.
    pub(crate) fn degenerate_error(&self) -> Error {
        Error::DegenerateTable {
            p_hat: self.p_hat(),
            q_hat: self.q_hat(),
            w_hat: self.w_hat(),
        }
    }
}
