use thiserror::Error;

/// Errors raised by constructors, checks and file loaders.
///
/// Property failures (a map that is not monotone, a pair that is not a
/// connection) are never errors; they come back as reports with witnesses.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("missing entropy value for state `{0}`")]
    MissingEntropy(String),
    #[error("state `{0}` is outside the carrier")]
    OutsideCarrier(String),
    #[error("relation size {pairs} exceeds the cap of {cap} pairs")]
    SizeCap { pairs: usize, cap: usize },
    #[error("order is not antisymmetric: {0} (quotient the adiabats first)")]
    NotAntisymmetric(String),
    #[error("map does not land in its target: {0}")]
    NotTotal(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("connection is not verified")]
    Unverified,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid rational `{0}`")]
    BadRational(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
