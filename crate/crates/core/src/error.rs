use thiserror::Error;

use crate::scalar::Field;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("malformed presentation: {0}")]
    MalformedPresentation(String),
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("unknown hom space: {0}")]
    UnknownHomSpace(String),
    #[error("malformed frontier: {0}")]
    MalformedFrontier(String),
    #[error("frontier tower unavailable: {0}")]
    TowerUnavailable(String),
    #[error("interval not finite: {0}")]
    IntervalNotFinite(String),
    #[error("support mismatch: {0}")]
    SupportMismatch(String),
    #[error("input is zero")]
    ZeroInput,
    #[error("module is not locally finite: {0}")]
    NotLocallyFinite(String),
    #[error("hypothesis not certified: {0}")]
    HypothesisNotCertified(String),
    #[error("hypothesis not satisfied: {0}")]
    HypothesisNotSatisfied(String),
    #[error("cocycle condition violated: {0}")]
    CocycleViolated(String),
    #[error("unknown gallery entry {0:?}")]
    UnknownGallery(String),
    #[error("bad window {0:?}")]
    BadWindow(String),
    #[error("not representable by finite data: {0}")]
    Unrepresentable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
