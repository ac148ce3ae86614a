use thiserror::Error;

/// Errors raised by constructors and structure-map evaluation.
///
/// Verification failures are never errors; they are reported as data.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("bad specification: {0}")]
    BadSpec(String),
    #[error("composition table is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NonAssociative(usize, usize, usize),
    #[error("composition table has no identity element")]
    MissingIdentity,
    #[error("element {0} has no two-sided inverse")]
    MissingInverse(usize),
    #[error("group order {order} exceeds the configured bound {bound}")]
    OrderBoundExceeded { order: usize, bound: usize },
    #[error("invalid G-set: {0}")]
    InvalidGSet(String),
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("exponential diagram needs {needed} sections, bound is {bound}")]
    SectionBlowup { needed: usize, bound: usize },
    #[error("G-set has {size} points, bound is {bound}")]
    PointBoundExceeded { size: usize, bound: usize },
    #[error("value does not match the orbit structure of the G-set: {0}")]
    LevelMismatch(String),
    #[error("seed monoid is not saturated: {0}")]
    NotSaturated(String),
    #[error("seed monoid is not G-invariant: {0}")]
    NotInvariant(String),
    #[error("level ideal is not G-invariant: {0}")]
    NotInvariantIdeal(String),
    #[error("denominator is not in the multiplicative subfunctor: {0}")]
    NotADenominator(String),
    #[error("equality could not be decided: {0}")]
    UndecidedEquality(String),
    #[error("image of a denominator is not invertible: {0}")]
    NotInvertibleImage(String),
    #[error("ideal meets the denominators: {0}")]
    IdealMeetsDenominators(String),
    #[error("carrier does not support this decision: {0}")]
    UndecidableCarrier(String),
    #[error("transfer image depends on the chosen base point: {0}")]
    BasePointDependence(String),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
