//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on user-supplied values was violated.
    #[error("validation: {0}")]
    Validation(String),

    /// Array or matrix dimensions do not line up.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// LU elimination hit a pivot below the guard threshold. Cannot occur
    /// for the strictly diagonally dominant systems built by `linop::build_a`;
    /// guards misuse with hand-built matrices.
    #[error("singular system: |pivot| = {pivot:e} < {limit:e} at row {row}")]
    SingularPivot { row: usize, pivot: f64, limit: f64 },

    /// A field value became NaN or infinite during time stepping.
    #[error("non-finite field value at step {step}")]
    NonFinite { step: u64 },

    /// Argument outside the mathematical domain of a function.
    #[error("domain: {0}")]
    Domain(String),

    /// Root bracketing or refinement failed.
    #[error("no root: {0}")]
    NoRoot(String),

    /// Level-set tracking found no usable threshold crossing.
    #[error("no crossing: {0}")]
    NoCrossing(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by invalid inputs (as opposed to runtime or
    /// numerical failures). The CLI maps these to exit code 1, the rest to 2.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Validation(_) | Error::Dimension(_) | Error::Domain(_)
        )
    }
}
