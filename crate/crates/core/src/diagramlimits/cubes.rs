use std::collections::BTreeMap;

use crate::exactlin::{rank, solve_matrix, ExactMatrix, RingSpec};
use crate::functorcalc::FunctorData;
use crate::pointedsets::{hypercube_specs, special_hypercube, HypercubeSpec, SpecialHypercube};

use super::{is_iso, Diagram, LimitError};

/// The canonical map from a source vertex into the limit of a sub-diagram,
/// in the computed limit basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeComparison {
    pub limit_rank: usize,
    pub source_rank: usize,
    /// `limit_rank × source_rank`.
    pub comparison: ExactMatrix,
    pub iso: bool,
    pub injective: bool,
    pub surjective: bool,
}

impl CubeComparison {
    fn new(comparison: ExactMatrix) -> Self {
        let (limit_rank, source_rank) = comparison.shape();
        let injective = rank(&comparison) == source_rank;
        let surjective = limit_rank == 0
            || solve_matrix(&comparison, &ExactMatrix::identity(comparison.ring(), limit_rank))
                .expect("shapes agree")
                .is_some();
        CubeComparison { limit_rank, source_rank, iso: is_iso(&comparison), injective, surjective, comparison }
    }
}

/// The diagram of `G` over the listed vertices of a cube, generated by the
/// codimension-one arrows between them.
pub fn hypercube_diagram(g: &FunctorData, cube: &SpecialHypercube, vertices: &[u32]) -> Result<Diagram, LimitError> {
    let mut d = Diagram::new(g.ring());
    let index: BTreeMap<u32, usize> =
        vertices.iter().map(|&v| (v, d.add_vertex(g.rank(cube.vertex_size(v))))).collect();
    for (from, to) in cube.edges() {
        if let (Some(&a), Some(&b)) = (index.get(&from), index.get(&to)) {
            d.add_edge(a, b, g.action(&cube.arrow(from, to)).as_ref().clone())?;
        }
    }
    Ok(d)
}

/// `G(source) → lim_{v ∈ vertices} G(v)`; `vertices` must be closed under
/// passing to sub-vertices (codimension-one arrows then generate).
fn compare(
    g: &FunctorData,
    cube: &SpecialHypercube,
    source: u32,
    vertices: &[u32],
) -> Result<CubeComparison, LimitError> {
    let d = hypercube_diagram(g, cube, vertices)?;
    let basis = d.limit();
    let src_rank = g.rank(cube.vertex_size(source));
    let legs: Vec<ExactMatrix> = vertices.iter().map(|&v| g.action(&cube.arrow(source, v)).as_ref().clone()).collect();
    let refs: Vec<&ExactMatrix> = legs.iter().collect();
    let cone = ExactMatrix::vstack(g.ring(), src_rank, &refs);
    let comparison = d
        .limit_coordinates(&basis, &cone)
        .ok_or_else(|| LimitError::PreconditionViolated("the cube legs do not form a cone".into()))?;
    Ok(CubeComparison::new(comparison))
}

fn check_size(g: &FunctorData, spec: &HypercubeSpec) -> Result<(), LimitError> {
    if spec.total() > g.max_size() {
        return Err(LimitError::PreconditionViolated(format!(
            "cube of total size {} exceeds N = {}",
            spec.total(),
            g.max_size()
        )));
    }
    Ok(())
}

/// The initial vertex maps isomorphically onto the limit of the rest.
pub fn is_weakly_cartesian(g: &FunctorData, spec: &HypercubeSpec) -> Result<bool, LimitError> {
    check_size(g, spec)?;
    let cube = special_hypercube(spec);
    let rest: Vec<u32> = cube.vertices().into_iter().filter(|&v| v != cube.top()).collect();
    Ok(compare(g, &cube, cube.top(), &rest)?.iso)
}

/// Every square face is cartesian.
pub fn is_strongly_cartesian(g: &FunctorData, spec: &HypercubeSpec) -> Result<bool, LimitError> {
    check_size(g, spec)?;
    let cube = special_hypercube(spec);
    for (v, b, c) in cube.squares() {
        let (vb, vc) = (v & !(1 << b), v & !(1 << c));
        if !compare(g, &cube, v, &[vb, vc, vb & vc])?.iso {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Weakly cartesian on every special cube with more than `n` blocks and
/// total size at most `N`.
pub fn is_n_excisive(g: &FunctorData, n: usize) -> bool {
    hypercube_specs(g.max_size(), n + 1)
        .iter()
        .all(|spec| is_weakly_cartesian(g, spec).expect("specs respect the size bound"))
}

/// Limit over the vertices of height `≤ h` and the map from the initial vertex.
pub fn truncated_cube_limit(g: &FunctorData, spec: &HypercubeSpec, h: usize) -> Result<CubeComparison, LimitError> {
    check_size(g, spec)?;
    if h > spec.dimension() {
        return Err(LimitError::PreconditionViolated(format!("height {h} exceeds {}", spec.dimension())));
    }
    let cube = special_hypercube(spec);
    let low: Vec<u32> = cube.vertices().into_iter().filter(|v| v.count_ones() as usize <= h).collect();
    compare(g, &cube, cube.top(), &low)
}

/// Values and codimension-one maps of a functor on the vertices of height
/// `≤ 2` of the `n`-cube with singleton blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeSkeleton {
    ring: RingSpec,
    n: usize,
    ranks: BTreeMap<u32, usize>,
    maps: BTreeMap<(u32, u32), ExactMatrix>,
}

impl CubeSkeleton {
    /// Checks completeness and shapes; commutativity is checked by
    /// [`cube_reconstruct`].
    pub fn new(
        ring: RingSpec,
        n: usize,
        ranks: BTreeMap<u32, usize>,
        maps: BTreeMap<(u32, u32), ExactMatrix>,
    ) -> Result<Self, LimitError> {
        if n < 3 {
            return Err(LimitError::PreconditionViolated(format!("skeleton needs n >= 3, got {n}")));
        }
        let cube = special_hypercube(&HypercubeSpec::singletons(n));
        for v in low_vertices(&cube) {
            if !ranks.contains_key(&v) {
                return Err(LimitError::InconsistentSkeleton(format!("no module at vertex {v:#b}")));
            }
        }
        for (from, to) in low_edges(&cube) {
            let m = maps
                .get(&(from, to))
                .ok_or_else(|| LimitError::InconsistentSkeleton(format!("no map {from:#b} -> {to:#b}")))?;
            if m.shape() != (ranks[&to], ranks[&from]) || m.ring() != ring {
                return Err(LimitError::InconsistentSkeleton(format!("map {from:#b} -> {to:#b} has the wrong shape")));
            }
        }
        Ok(CubeSkeleton { ring, n, ranks, maps })
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank_at(&self, vertex: u32) -> usize {
        self.ranks[&vertex]
    }

    pub fn map(&self, from: u32, to: u32) -> &ExactMatrix {
        &self.maps[&(from, to)]
    }

    /// Replaces one map, keeping its shape.
    pub fn with_map(mut self, from: u32, to: u32, m: ExactMatrix) -> Result<Self, LimitError> {
        let old = self
            .maps
            .get_mut(&(from, to))
            .ok_or_else(|| LimitError::InconsistentSkeleton(format!("no map {from:#b} -> {to:#b}")))?;
        if old.shape() != m.shape() {
            return Err(LimitError::InconsistentSkeleton("replacement map has the wrong shape".into()));
        }
        *old = m;
        Ok(self)
    }
}

fn low_vertices(cube: &SpecialHypercube) -> Vec<u32> {
    cube.vertices().into_iter().filter(|v| v.count_ones() <= 2).collect()
}

fn low_edges(cube: &SpecialHypercube) -> Vec<(u32, u32)> {
    cube.edges().into_iter().filter(|(from, _)| from.count_ones() <= 2).collect()
}

/// The skeleton of `G` on the `n`-cube with singleton blocks.
pub fn skeleton_of(g: &FunctorData, n: usize) -> Result<CubeSkeleton, LimitError> {
    if n > g.max_size() {
        return Err(LimitError::BudgetExceeded { ell: n, max: g.max_size() });
    }
    let cube = special_hypercube(&HypercubeSpec::singletons(n));
    let ranks = low_vertices(&cube).into_iter().map(|v| (v, g.rank(v.count_ones() as usize))).collect();
    let maps =
        low_edges(&cube).into_iter().map(|(a, b)| ((a, b), g.action(&cube.arrow(a, b)).as_ref().clone())).collect();
    CubeSkeleton::new(g.ring(), n, ranks, maps)
}

/// The limit of a skeleton, as a submodule of `⊕_{|v| ≤ 2} M(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reconstruction {
    pub n: usize,
    pub rank: usize,
    pub basis: ExactMatrix,
    vertices: Vec<u32>,
    diagram: Diagram,
}

impl Reconstruction {
    /// The canonical map `G(n) → reconstruction`, for a functor whose
    /// skeleton was reconstructed.
    pub fn certify(&self, g: &FunctorData) -> Result<CubeComparison, LimitError> {
        let cube = special_hypercube(&HypercubeSpec::singletons(self.n));
        let legs: Vec<ExactMatrix> =
            self.vertices.iter().map(|&v| g.action(&cube.arrow(cube.top(), v)).as_ref().clone()).collect();
        let refs: Vec<&ExactMatrix> = legs.iter().collect();
        let cone = ExactMatrix::vstack(g.ring(), g.rank(self.n), &refs);
        let comparison = self
            .diagram
            .limit_coordinates(&self.basis, &cone)
            .ok_or_else(|| LimitError::PreconditionViolated("functor does not match the skeleton".into()))?;
        Ok(CubeComparison::new(comparison))
    }
}

/// Rebuilds `G(n)` from the height-`≤ 2` part of the `n`-cube.
pub fn cube_reconstruct(skeleton: &CubeSkeleton) -> Result<Reconstruction, LimitError> {
    let n = skeleton.n;
    let cube = special_hypercube(&HypercubeSpec::singletons(n));
    for v in low_vertices(&cube).into_iter().filter(|v| v.count_ones() == 2) {
        let bits: Vec<u32> = (0..n as u32).filter(|b| v & (1 << b) != 0).map(|b| 1 << b).collect();
        let (x, y) = (v & !bits[0], v & !bits[1]);
        let left = skeleton.map(x, 0) * skeleton.map(v, x);
        let right = skeleton.map(y, 0) * skeleton.map(v, y);
        if left != right {
            return Err(LimitError::InconsistentSkeleton(format!("square at {v:#b} does not commute")));
        }
    }
    let vertices = low_vertices(&cube);
    let mut diagram = Diagram::new(skeleton.ring);
    let index: BTreeMap<u32, usize> = vertices.iter().map(|&v| (v, diagram.add_vertex(skeleton.ranks[&v]))).collect();
    for (from, to) in low_edges(&cube) {
        diagram.add_edge(index[&from], index[&to], skeleton.map(from, to).clone())?;
    }
    let basis = diagram.limit();
    Ok(Reconstruction { n, rank: basis.cols(), basis, vertices, diagram })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functorcalc::{constant_functor, ind, ind_constant, SurjFunctorData};

    fn concentrated(ring: RingSpec, n: usize, size: usize) -> FunctorData {
        let mut ranks = vec![0; n + 1];
        ranks[size] = 1;
        ind(&SurjFunctorData::from_fn(ring, n, ranks.clone(), |s| {
            if s.source() == size && s.target() == size {
                ExactMatrix::identity(ring, 1)
            } else {
                ExactMatrix::zeros(ring, ranks[s.target()], ranks[s.source()])
            }
        }))
    }

    #[test]
    fn one_cube_unfolds() {
        let q = RingSpec::Rationals;
        let spec = HypercubeSpec::new(vec![1]).unwrap();
        assert!(is_weakly_cartesian(&constant_functor(q, 2, 2), &spec).unwrap());
        assert!(!is_weakly_cartesian(&concentrated(q, 2, 1), &spec).unwrap());
    }

    #[test]
    fn top_summand_is_invisible() {
        let q = RingSpec::Rationals;
        let g = concentrated(q, 3, 3);
        let spec = HypercubeSpec::singletons(3);
        assert!(!is_weakly_cartesian(&g, &spec).unwrap());
        assert!(is_n_excisive(&g, 3));
        assert!(!is_n_excisive(&g, 2));
        let full = truncated_cube_limit(&g, &spec, 3).unwrap();
        assert!(full.iso);
    }

    #[test]
    fn quadratic_cubes_are_cartesian() {
        let z = RingSpec::Integers;
        let g = concentrated(z, 3, 2);
        let spec = HypercubeSpec::singletons(3);
        assert!(is_weakly_cartesian(&g, &spec).unwrap());
        assert!(truncated_cube_limit(&g, &spec, 2).unwrap().iso);
        assert!(!truncated_cube_limit(&g, &spec, 1).unwrap().iso);
    }

    #[test]
    fn strongly_cartesian_faces() {
        let q = RingSpec::Rationals;
        let spec = HypercubeSpec::singletons(2);
        assert!(is_strongly_cartesian(&concentrated(q, 2, 1), &spec).unwrap());
        assert!(!is_strongly_cartesian(&ind_constant(q, 2), &spec).unwrap());
    }

    #[test]
    fn reconstruct_constant_and_detect_inconsistency() {
        let q = RingSpec::Rationals;
        let g = constant_functor(q, 3, 2);
        let skel = skeleton_of(&g, 3).unwrap();
        let rec = cube_reconstruct(&skel).unwrap();
        assert_eq!(rec.rank, 2);
        assert!(rec.certify(&g).unwrap().iso);
        let bad = skel.with_map(0b011, 0b001, ExactMatrix::identity(q, 2).scale(2)).unwrap();
        assert!(matches!(cube_reconstruct(&bad), Err(LimitError::InconsistentSkeleton(_))));
    }

    #[test]
    fn degree_three_escapes_the_skeleton() {
        let q = RingSpec::Rationals;
        let g = concentrated(q, 4, 3);
        let rec = cube_reconstruct(&skeleton_of(&g, 4).unwrap()).unwrap();
        let cert = rec.certify(&g).unwrap();
        assert!(!cert.iso && !cert.injective);
        assert!(cert.surjective);
    }

    #[test]
    fn size_bound_is_enforced() {
        let g = constant_functor(RingSpec::Rationals, 2, 1);
        assert!(is_weakly_cartesian(&g, &HypercubeSpec::singletons(3)).is_err());
        assert!(skeleton_of(&g, 3).is_err());
    }
}
