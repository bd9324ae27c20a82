//! Limits of functor data over finite diagrams: truncated surjection
//! categories and (partial) special hypercubes.
//!
//! Every limit is the kernel of one assembled constraint matrix whose row
//! blocks are the edge equations `M_e · a_source − a_target = 0`.

mod cubes;
mod nerve;
mod surj;

use thiserror::Error;

use crate::exactlin::{kernel_basis, solve_matrix, ExactMatrix, LinAlgError, RingSpec};
use crate::functorcalc::FunctorError;

pub use cubes::{
    cube_reconstruct, hypercube_diagram, is_n_excisive, is_strongly_cartesian, is_weakly_cartesian, skeleton_of,
    truncated_cube_limit, CubeComparison, CubeSkeleton, Reconstruction,
};
pub use nerve::{derived_limits, DerivedLimits};
pub use surj::{
    check_vanishing, coordinate_trace, counterexample_family, limit_over_surjections, limit_over_surjections_with,
    restriction_map, surjection_diagram, Constraints, CoordinateTrace, CounterexampleFamily, LimitResult,
    VanishingVerdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimitError {
    #[error("truncation {ell} is outside 1..={max}")]
    BudgetExceeded { ell: usize, max: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("inconsistent skeleton: {0}")]
    InconsistentSkeleton(String),
    #[error("operation needs a field, got {0}")]
    WrongRing(RingSpec),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Linalg(#[from] LinAlgError),
}

/// An arrow of a finite diagram of free modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub matrix: ExactMatrix,
}

/// A finite diagram of free modules, given by generating arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    ring: RingSpec,
    ranks: Vec<usize>,
    edges: Vec<Edge>,
}

impl Diagram {
    pub fn new(ring: RingSpec) -> Self {
        Diagram { ring, ranks: Vec::new(), edges: Vec::new() }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn add_vertex(&mut self, rank: usize) -> usize {
        self.ranks.push(rank);
        self.ranks.len() - 1
    }

    pub fn add_edge(&mut self, source: usize, target: usize, matrix: ExactMatrix) -> Result<(), LimitError> {
        let expected = (self.ranks[target], self.ranks[source]);
        if matrix.shape() != expected {
            return Err(FunctorError::Shape {
                what: format!("diagram edge {source} -> {target}"),
                expected,
                found: matrix.shape(),
            }
            .into());
        }
        self.edges.push(Edge { source, target, matrix });
        Ok(())
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Start of each vertex inside `⊕_v G(v)`.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.ranks
            .iter()
            .map(|r| {
                let o = acc;
                acc += r;
                o
            })
            .collect()
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// One row block `M_e · a_source − a_target` per edge.
    pub fn constraint_matrix(&self) -> ExactMatrix {
        let offsets = self.offsets();
        let rows: usize = self.edges.iter().map(|e| self.ranks[e.target]).sum();
        let mut c = ExactMatrix::zeros(self.ring, rows, self.total_rank());
        let mut r = 0;
        for e in &self.edges {
            let minus_id = ExactMatrix::identity(self.ring, self.ranks[e.target]).scale(-1);
            if e.source == e.target {
                c = c.with_block(r, offsets[e.source], &(&e.matrix + &minus_id));
            } else {
                c = c.with_block(r, offsets[e.source], &e.matrix);
                c = c.with_block(r, offsets[e.target], &minus_id);
            }
            r += self.ranks[e.target];
        }
        c
    }

    /// Columns form a basis of the limit inside `⊕_v G(v)` (a saturated
    /// lattice over Z).
    pub fn limit(&self) -> ExactMatrix {
        kernel_basis(&self.constraint_matrix())
    }

    /// Coordinates, in the limit basis, of cone columns (compatible families
    /// written in `⊕_v G(v)`); `None` if some column is not a limit element.
    pub fn limit_coordinates(&self, basis: &ExactMatrix, cone: &ExactMatrix) -> Option<ExactMatrix> {
        solve_matrix(basis, cone).ok().flatten()
    }
}

/// Whether a square matrix is invertible over its ring; non-square
/// matrices never are.
pub(crate) fn is_iso(m: &ExactMatrix) -> bool {
    m.is_square() && crate::exactlin::is_invertible(m)
}
