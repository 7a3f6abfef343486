use crate::dyadic::Dyadic;
use thiserror::Error;

/// Errors produced by constructors and partial operations.
///
/// Everything that can be validated is validated at construction time, so
/// most arithmetic downstream is total.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("a map needs at least two breakpoints")]
    TooFewBreakpoints,

    #[error("breakpoints must be strictly increasing in both coordinates")]
    NotMonotone,

    #[error("segment slope is not a power of two")]
    SlopeNotPowerOfTwo,

    #[error("interval endpoints must satisfy lo < hi (got [{lo}, {hi}])")]
    EmptyInterval { lo: Dyadic, hi: Dyadic },

    #[error("{x} is outside the domain [{lo}, {hi}]")]
    OutOfDomain { x: Dyadic, lo: Dyadic, hi: Dyadic },

    #[error("inner range [{got_lo}, {got_hi}] does not match outer domain [{want_lo}, {want_hi}]")]
    DomainMismatch {
        got_lo: Dyadic,
        got_hi: Dyadic,
        want_lo: Dyadic,
        want_hi: Dyadic,
    },

    #[error("pieces do not glue: {0}")]
    ConcatMismatch(String),

    #[error("fundamental domain must be [0, 1]")]
    BadFundamentalDomain,

    #[error("fundamental must satisfy f(1) = f(0) + 1")]
    NotPeriodic,

    #[error("element has a fixed point, so it admits no root")]
    HasFixedPoint,

    #[error("element moves points downward; root its inverse instead")]
    NegativeDisplacement,

    #[error("root degree must be at least 2 (got {0})")]
    RootDegreeTooSmall(u64),

    #[error("g^{0} is not the unit translation")]
    OrderMismatch(u64),

    #[error("prescribed root value {value} is not strictly between 0 and g(0) = {limit}")]
    ValueOutOfRange { value: Dyadic, limit: Dyadic },

    #[error("index must be at least {min} (got {got})")]
    IndexTooSmall { min: u64, got: u64 },

    #[error("word form `{form}` supports n in {lo}..={hi} (got {n})")]
    WordFormRange {
        form: &'static str,
        lo: u64,
        hi: u64,
        n: u64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
