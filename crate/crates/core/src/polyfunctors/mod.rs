//! The polynomial functors `P_{n,d}` and `P_{n,≤d}`, their monomial
//! decomposition on special hypercubes, and a brute-force oracle for
//! symmetric forms in three variables.

mod monomials;
mod sympoly;

use thiserror::Error;

use crate::diagramlimits::LimitError;
use crate::exactlin::{LinAlgError, RingSpec};

pub use monomials::{
    build_p, build_p_le, monomial_basis, monomial_orbit_decomposition, Monomial, OrbitDecomposition, OrbitPiece,
};
pub use sympoly::{
    charp_counterexample, satisfies_constraints, surjection_limit_check, sym_poly_implication,
    sym_poly_implication_capped, CharpCounterexample, SurjectionLimitCheck, SymImplication, SymPoly,
    RATIONAL_DEGREE_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("the counterexample needs a prime p >= 5, got {0}")]
    PrimeTooSmall(u64),
    #[error("operation needs a field, got {0}")]
    WrongRing(RingSpec),
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("at least one colour of variables is needed")]
    NoColours,
    #[error("not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error(transparent)]
    Linalg(#[from] LinAlgError),
    #[error(transparent)]
    Limit(#[from] LimitError),
}
