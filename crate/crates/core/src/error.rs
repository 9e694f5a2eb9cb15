use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u32 },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("field of order {p}^{e} exceeds the supported size 2^16")]
    FieldTooLarge { p: u32, e: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("both resultant operands are constant in y")]
    BothConstantInY,
    #[error("polynomial is not divisible by {0}")]
    NotDivisible(String),
    #[error("coefficient {index} is not determined by the prefix")]
    AmbiguousContinuation { index: usize },
    #[error("prefix does not extend to a root (inconsistent at x^{index})")]
    NoContinuation { index: usize },
    #[error("precision exhausted")]
    PrecisionExhausted,
    #[error("denominator has zero constant term")]
    NonUnitDenominator,
    #[error("polynomial is not separable in y (resultant with dP/dy vanishes)")]
    NotSeparable,
    #[error("polynomial has degree 0 in y")]
    DegreeZero,
    #[error("invalid root prefix: {0}")]
    InvalidPrefix(String),
    #[error("shifted polynomial is singular at the origin")]
    SmoothnessCheckFailed,
    #[error("series does not start with the preparation prefix")]
    PrefixMismatch,
    #[error("digit {digit} out of range for q = {q}")]
    DigitOutOfRange { digit: u32, q: u32 },
    #[error("orbit exceeded {0} states")]
    StateExplosion(usize),
    #[error("internal invariant violated: {0}")]
    InvariantBreach(String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("root selection: {0}")]
    RootSelection(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
