use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("generator is not Hermitian (max |H - H†| = {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("distance must be positive, got {0}")]
    NonPositiveDistance(f64),
    #[error("atoms {0} and {1} share the same position")]
    CoincidentAtoms(String, String),
    #[error("duplicate atom label {0:?}")]
    DuplicateLabel(String),
    #[error("array has no data atom")]
    NoDataAtom,
    #[error("unknown atom label {0:?}")]
    UnknownLabel(String),
    #[error("unknown layout {0:?} (expected one of: chain3, chain5, yshape)")]
    UnknownLayout(String),
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("pulse has no targets")]
    EmptyPulse,
    #[error("simultaneous targets {0} and {1} blockade each other")]
    BlockadedTargets(String, String),
    #[error("base pair {0} is not provided; supported pairs: 00-01, 00-11, 01-10, 01-11, 10-11")]
    UnsupportedPair(String),
    #[error("gate {gate} needs layout {expected}, found {found}")]
    LayoutMismatch {
        gate: String,
        expected: String,
        found: String,
    },
    #[error("unknown gate {name:?}; valid names: {valid}")]
    UnknownGate { name: String, valid: String },
    #[error("malformed schedule: {0}")]
    Schedule(String),
}
