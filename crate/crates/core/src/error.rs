use thiserror::Error;

/// Every failure the engine can report. Negative *verdicts* (a tower that is
/// not pro-zero inside the window, an undetermined limit) are not errors and
/// live in [`crate::towers::Verdict`] instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("UNSUPPORTED_DOMAIN: {0}")]
    UnsupportedDomain(String),
    #[error("DEGREE_CAP_EXCEEDED: degree {degree} exceeds cap {cap}")]
    DegreeCapExceeded { cap: u32, degree: u32 },
    #[error("ZERO_LOCALIZATION: cannot localize at an element that is zero in the ring")]
    ZeroLocalization,
    #[error("NOT_A_COMPLEX: {0}")]
    NotAComplex(String),
    #[error("DEGREE_OUT_OF_RANGE: degree {degree} outside 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("BAD_LEVELS: source level {source_level} is below target level {target_level}")]
    BadLevels { source_level: usize, target_level: usize },
    #[error("NOT_CARTIER: {0}")]
    NotCartier(String),
    #[error("NOT_CHECKABLE: {0}")]
    NotCheckable(String),
    #[error("REPLAY_INCOMPATIBLE: {0}")]
    ReplayIncompatible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Stable machine-readable code used in reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnsupportedDomain(_) => "UNSUPPORTED_DOMAIN",
            Error::DegreeCapExceeded { .. } => "CAP_EXCEEDED",
            Error::ZeroLocalization => "ZERO_LOCALIZATION",
            Error::NotAComplex(_) => "NOT_A_COMPLEX",
            Error::DegreeOutOfRange { .. } => "DEGREE_OUT_OF_RANGE",
            Error::BadLevels { .. } => "BAD_LEVELS",
            Error::NotCartier(_) => "NOT_CARTIER",
            Error::NotCheckable(_) => "NOT_CHECKABLE",
            Error::ReplayIncompatible(_) => "REPLAY_INCOMPATIBLE",
            Error::Parse(_) => "PARSE_ERROR",
            Error::Invalid(_) => "INVALID_INPUT",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
