use thiserror::Error;

use crate::arith::ArithError;
use crate::poly::PolyError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("polynomial {poly} is not a homogeneous quadratic form")]
    NotHomogeneousQuadratic { poly: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("resource limit exceeded: {what} > {limit}")]
    ResourceLimit { what: &'static str, limit: usize },
    #[error("homogeneous characteristic {chi} is odd")]
    OddHomogeneousChi { chi: i64 },
    #[error("no stabilization after {attempts} steps")]
    NoStabilization { attempts: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
