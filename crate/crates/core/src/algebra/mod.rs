//! Exact rational scalars, sparse multivariate polynomials, resultants and
//! plane polynomial maps.

mod map;
mod poly;
pub mod rational;
mod resultant;
pub mod univariate;

use thiserror::Error;

pub use map::{Point, PolyMap};
pub use poly::{Monomial, MultiPoly, Ring};
pub use rational::Rational;
pub use resultant::{
    determinant, from_univariate, gcd_univariate, resultant, squarefree_part, sylvester_matrix, to_univariate,
};
pub use univariate::{RootSearch, UniPoly};

/// Default bound on the total degree accepted by expensive operations.
pub const DEFAULT_DEGREE_CAP: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("ring mismatch: ({}) vs ({})", left.join(","), right.join(","))]
    RingMismatch { left: Vec<String>, right: Vec<String> },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("degree {degree} exceeds the cap of {cap}")]
    DegreeCap { degree: u64, cap: u32 },
    #[error("variable `{0}` occurs in neither polynomial")]
    VariableAbsent(String),
    #[error("not univariate: {0}")]
    NotUnivariate(String),
    #[error("zero polynomial not allowed here")]
    ZeroInput,
}
