//! Polynomial algebra: sparse multivariate polynomials over Q, dense
//! univariate polynomials over an ordered field, real root isolation and
//! subresultants.

mod field;
mod multi;
mod parse;
pub mod subres;
pub mod uni;

use thiserror::Error;

pub use field::{FieldCtx, RationalField};
pub use multi::{indexed_vars, pow_rat, var_names, Monomial, MultiPoly};
pub use parse::parse_poly;
pub use subres::{discriminant, principal_subresultant_coeffs, resultant};
pub use uni::{sign_variations, RootLocation, UniPoly};

/// A finite list of signs, e.g. `σ(C_0), …, σ(C_k), +1`.
pub type SignSequence = Vec<crate::arith::Sign>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },
    #[error("expected {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial division is not exact")]
    NotDivisible,
    #[error("degree {degree} exceeds maximum {max}")]
    DegreeTooHigh { degree: u32, max: u32 },
    #[error("degree {degree} is below minimum {min}")]
    DegreeTooLow { degree: u32, min: u32 },
    #[error("parse error at byte {position}: unexpected {token}")]
    Parse { position: usize, token: String },
    #[error("unknown variable {name} at byte {position}")]
    UnknownVariable { name: String, position: usize },
}
