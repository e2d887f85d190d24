// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the combinatorial kernels and the classifier.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("length {g} exceeds the cap of {max}")]
    LengthCap { g: usize, max: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("segment [{m},{n}] is not coprime")]
    NonCoprime { m: u32, n: u32 },

    #[error("final type is not symmetric: {0}")]
    NotSymmetric(String),

    #[error("pi map is not a bijection: {0}")]
    NotBijective(String),

    #[error("invalid base pair ({m},{n}): need m >= n >= 0, gcd 1, not (0,0)")]
    InvalidPair { m: u32, n: u32 },

    #[error("cell not found: {0}")]
    CellNotFound(String),

    #[error("invalid ledger entry: {0}")]
    InvalidLedger(String),

    #[error("contradiction: {0}")]
    Contradiction(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors that indicate a bug or an inconsistent rule base
    /// rather than bad user input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Contradiction(_) | Error::Internal(_) | Error::NotBijective(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
