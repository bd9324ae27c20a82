//! Skeletal combinatorics of `FinSet_{*,≤N}` and `FinSetSurj_{n.e.,≤ℓ}`.
//!
//! Objects are sizes; `{*} ⊔ [m]` has size `m`. Subsets are `u32` bitmasks
//! over `1..=m`, products and unions are linearized lexicographically.

mod hypercube;
mod maps;

use thiserror::Error;

pub use hypercube::{hypercube_specs, special_hypercube, HypercubeSpec, SpecialHypercube};
pub use maps::{
    collapse_map, enumerate_pointed_maps, enumerate_surjections, mask_elements, mask_of, phi_map, pointed_generators,
    psi_map, smash, subsets_in_order, surjection_generators, wedge, PointedMap, Surjection,
};
pub(crate) use maps::{phi_mask, psi_mask};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetsError {
    #[error("element {element} is not in [{size}] (or is repeated)")]
    SubsetOutOfRange { element: usize, size: usize },
    #[error("image {image} is not in {{*}} ⊔ [{target}]")]
    BadImage { image: usize, target: usize },
    #[error("image list {0:?} is not surjective")]
    NotSurjective(Vec<usize>),
    #[error("maps do not compose: inner lands in size {inner}, outer starts at size {outer}")]
    NotComposable { inner: usize, outer: usize },
    #[error("size {size} exceeds the configured bound {budget}")]
    BudgetExceeded { size: usize, budget: usize },
    #[error("hypercube blocks must be a nonempty list of positive sizes, got {0:?}")]
    BadHypercube(Vec<usize>),
}
