use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over the base field")]
    ReducibleModulus,
    #[error("modulus has degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("modulus is not monic")]
    NotMonic,
    #[error("coefficient {value} is out of range for a field of size {size}")]
    CoefficientOutOfRange { value: u64, size: u64 },
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("operands live in different fields")]
    MixedFields,
    #[error("operation requires a nonzero subspace")]
    ZeroSpace,
    #[error("search budget exceeded after {examined} candidates (cap {cap}); {progress}")]
    SearchCapExceeded {
        examined: u64,
        cap: u64,
        progress: String,
    },
    #[error("enumeration of {required} items exceeds the budget of {cap}")]
    CapExceeded { required: u128, cap: u64 },
    #[error("pair is not critical: {0}")]
    NotCritical(String),
    #[error("no geometric progression basis found")]
    NoProgressionFound,
    #[error("unsupported type {0} for closed-form evaluation")]
    UnsupportedType(String),
    #[error("invalid form type {0}")]
    InvalidType(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("basis is linearly dependent")]
    DependentBasis,
    #[error("code is not linear")]
    NotLinear,
    #[error("code must contain at least two elements")]
    TooSmall,
    #[error("leading 3x3 subsystem is singular")]
    SingularSubsystem,
    #[error("character sum is not a rational integer (fibers {0:?})")]
    NonIntegralCharacterSum(Vec<u64>),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

impl Error {
    /// Stable variant name, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::ReducibleModulus => "ReducibleModulus",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::NotMonic => "NotMonic",
            Error::CoefficientOutOfRange { .. } => "CoefficientOutOfRange",
            Error::TooLarge(_) => "TooLarge",
            Error::MixedFields => "MixedFields",
            Error::ZeroSpace => "ZeroSpace",
            Error::SearchCapExceeded { .. } => "SearchCapExceeded",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::NotCritical(_) => "NotCritical",
            Error::NoProgressionFound => "NoProgressionFound",
            Error::UnsupportedType(_) => "UnsupportedType",
            Error::InvalidType(_) => "InvalidType",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::DependentBasis => "DependentBasis",
            Error::NotLinear => "NotLinear",
            Error::TooSmall => "TooSmall",
            Error::SingularSubsystem => "SingularSubsystem",
            Error::NonIntegralCharacterSum(_) => "NonIntegralCharacterSum",
            Error::Parse(_) => "Parse",
            Error::Inconsistent(_) => "Inconsistent",
        }
    }
}
