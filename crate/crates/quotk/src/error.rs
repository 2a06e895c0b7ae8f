//! Error type shared by every module, with stable process exit codes.

use thiserror::Error;

/// Failures surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Parameters outside their admissible window (rank, level, box, weights).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    /// Malformed textual input (partition strings, rational lists, fixtures).
    #[error("parse error: {0}")]
    Parse(String),
    /// A self-check that must never fail did fail.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    /// A q-series touched its truncation boundary where exactness was required.
    #[error("q-degree overflow: {0}")]
    QDegreeOverflow(String),
    /// The numeric validator could not certify a rational value.
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    /// Two torus weights coincide, so a localization denominator vanishes.
    #[error("degenerate weights: {0}")]
    DegenerateWeights(String),
    /// The constant term of a pairing matrix is not invertible over the integers.
    #[error("singular pairing: {0}")]
    SingularPairing(String),
    /// Operands live in character rings of different rank.
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParams(_) | Error::Parse(_) | Error::RankMismatch(..) => 2,
            Error::InternalInconsistency(_) | Error::SingularPairing(_) => 3,
            Error::QDegreeOverflow(_) => 4,
            Error::NumericFailure(_) | Error::DegenerateWeights(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
