//! Functors from pointed finite sets (and from surjections) to free modules,
//! the `Ind`/`Prim` equivalence, degree, and natural transformations.

mod analysis;
mod data;
mod indprim;
mod natural;
pub mod random;

use thiserror::Error;

use crate::exactlin::{LinAlgError, RingSpec};
use crate::pointedsets::SetsError;

pub use analysis::{
    check_condition, degree, validate, Condition, ValidationReport, Violation, EXHAUSTIVE_VALIDATION_MAX,
};
pub use data::{all_surjections, constant_functor, direct_sum, ActionRule, FunctorData, NatTransform, SurjFunctorData};
pub use indprim::{
    constant_surj, decompose, first_unnatural_surj, ind, ind_constant, ind_prim_isomorphism, prim, prim_basis,
    prim_ind_isomorphism, prim_parts, prim_rank, PrimParts, Summand,
};
pub use natural::{ind_nat, nat_cokernel, nat_kernel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("{what}: expected shape {}x{}, found {}x{}", expected.0, expected.1, found.0, found.1)]
    Shape { what: String, expected: (usize, usize), found: (usize, usize) },
    #[error("no action given for generator {0}")]
    MissingAction(String),
    #[error("{0} leaves the size bound {1}")]
    OutOfRange(String, usize),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(RingSpec, RingSpec),
    #[error("size bound mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("matrix at size {0} is not invertible over the ring")]
    NotInvertible(usize),
    #[error("naturality square fails for {0}")]
    NotNatural(String),
    #[error("direct sum of no functors")]
    EmptySum,
    #[error("unknown condition {0:?} (expected i, ii, iii or iv)")]
    BadCondition(String),
    #[error(transparent)]
    Linalg(#[from] LinAlgError),
    #[error(transparent)]
    Sets(#[from] SetsError),
}

impl FunctorError {
    pub(crate) fn shape(what: String, expected: (usize, usize), found: (usize, usize)) -> Self {
        FunctorError::Shape { what, expected, found }
    }
}
