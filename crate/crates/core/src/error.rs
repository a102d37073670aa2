// SPDX-License-Identifier: Apache-2.0

use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested tolerance cannot be met in double precision.
    #[error("precision error: requested tolerance {tol:e} is below working precision")]
    Precision { tol: f64 },

    /// Coefficient mass at the edge of the j-window is not negligible.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// A quantity overflowed or underflowed the representable range.
    #[error("range error: {0}")]
    Range(String),

    /// A value that must be nonnegative came out clearly negative.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] io::Error),
}
