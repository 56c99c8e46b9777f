use alloc::string::String;

use crate::exact::Rational;

pub type Result<T> = core::result::Result<T, MdsError>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MdsError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("slopes must satisfy s1 < s2 < s3")]
    SlopeOrder,
    #[error("width {0} \u{2265} 1")]
    WidthOutOfRange(Rational),
    #[error("pole: {0}")]
    Pole(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("weights {0},{1},{2} are not pairwise coprime")]
    NotCoprime(u64, u64, u64),
    #[error("reconstruction mismatch at ({a}, {b})")]
    ReconstructionMismatch { a: i64, b: i64 },
    #[error("unsupported minimal degree {0} (expected 5, 7 or 9)")]
    UnsupportedDprime(u32),
    #[error("malformed staircase: {0}")]
    MalformedStaircase(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl MdsError {
    /// Process exit code class: 2 parse/validation, 3 precondition, 4 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            MdsError::Parse(_)
            | MdsError::SlopeOrder
            | MdsError::UnsupportedDprime(_)
            | MdsError::MalformedStaircase(_)
            | MdsError::InvalidParameters(_) => 2,
            MdsError::WidthOutOfRange(_)
            | MdsError::NotCoprime(..)
            | MdsError::Pole(_)
            | MdsError::DivisionByZero
            | MdsError::Precondition(_) => 3,
            MdsError::ReconstructionMismatch { .. } | MdsError::Internal(_) => 4,
        }
    }
}
