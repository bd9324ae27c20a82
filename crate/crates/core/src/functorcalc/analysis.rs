use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exactlin::{kernel_basis, rank, smith_normal_form, solve_matrix, ExactMatrix, RingSpec};
use crate::pointedsets::{enumerate_pointed_maps, phi_mask, pointed_generators, psi_mask, PointedMap};

use super::data::FunctorData;
use super::indprim::{drop_mask, drop_projections, prim_rank};
use super::FunctorError;

/// Largest source size checked exhaustively by [`validate`].
pub const EXHAUSTIVE_VALIDATION_MAX: usize = 4;
const VALIDATION_SAMPLE: usize = 400;
const VALIDATION_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Shape { map: PointedMap, expected: (usize, usize), found: (usize, usize) },
    Identity { size: usize },
    Composition { outer: PointedMap, inner: PointedMap },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { map, expected, found } => {
                write!(f, "G({map}) has shape {}x{}, expected {}x{}", found.0, found.1, expected.0, expected.1)
            }
            Violation::Identity { size } => write!(f, "G(id) is not the identity at size {size}"),
            Violation::Composition { outer, inner } => {
                write!(f, "G({outer} o {inner}) != G({outer}) G({inner})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// Number of composition squares compared.
    pub checked: usize,
    /// Whether every map was used as the inner factor.
    pub exhaustive: bool,
    pub violation: Option<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scope = if self.exhaustive { "exhaustive" } else { "sampled" };
        match &self.violation {
            None => write!(f, "functor laws hold ({} squares, {scope})", self.checked),
            Some(v) => write!(f, "violation: {v} (after {} squares, {scope})", self.checked),
        }
    }
}

/// Checks shapes, the identity law, and `G(g ∘ f) = G(g) G(f)` for every
/// generator `g` and every map `f`. Together with the identity law this
/// implies full functoriality. For `N > 4` the maps `f` out of sizes above 3
/// are a fixed pseudo-random sample.
pub fn validate(g: &FunctorData) -> ValidationReport {
    let n = g.max_size();
    let mut report = ValidationReport { checked: 0, exhaustive: n <= EXHAUSTIVE_VALIDATION_MAX, violation: None };
    let gens = pointed_generators(n);
    for map in gens.iter().cloned().chain((0..=n).map(PointedMap::identity)) {
        let expected = (g.rank(map.target()), g.rank(map.source()));
        let found = g.action(&map).shape();
        if found != expected {
            report.violation = Some(Violation::Shape { map, expected, found });
            return report;
        }
    }
    for m in 0..=n {
        if !g.action(&PointedMap::identity(m)).is_identity() {
            report.violation = Some(Violation::Identity { size: m });
            return report;
        }
    }
    let mut inner: Vec<PointedMap> = Vec::new();
    let full_upto = if report.exhaustive { n } else { 3.min(n) };
    for a in 0..=n {
        for b in 0..=n {
            let maps = enumerate_pointed_maps(a, b, usize::MAX).unwrap();
            if a <= full_upto {
                inner.extend(maps);
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED ^ ((a * 16 + b) as u64));
                let per_pair = VALIDATION_SAMPLE / ((n - full_upto) * (n + 1));
                inner.extend(maps.choose_multiple(&mut rng, per_pair.max(1)).cloned());
            }
        }
    }
    for f in &inner {
        let gf = g.action(f);
        for outer in gens.iter().filter(|o| o.source() == f.target()) {
            report.checked += 1;
            let composite = g.action(&outer.compose(f).unwrap());
            if *composite != &*g.action(outer) * &gf {
                report.violation = Some(Violation::Composition { outer: outer.clone(), inner: f.clone() });
                return report;
            }
        }
    }
    report
}

/// The smallest `n` with `Prim(G)` zero above `n` (0 for the zero functor).
pub fn degree(g: &FunctorData) -> usize {
    (1..=g.max_size()).rev().find(|&m| prim_rank(g, m) > 0).unwrap_or(0)
}

/// The equivalent characterizations of "polynomial of degree `≤ n`".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    /// `G(I) = Σ_i Im G(φ_{I∖i, I})`.
    ImageSum,
    /// `∩_i ker G(ψ_{I∖i, I}) = 0`.
    KernelIntersection,
    /// `G(I) → ⊕_i G(I∖i) ⇉ ⊕_{i<j} G(I∖{i,j})` is an equalizer.
    Equalizer,
    /// `Prim(G)(I) = 0`.
    PrimSupport,
}

impl Condition {
    pub const ALL: [Condition; 4] =
        [Condition::ImageSum, Condition::KernelIntersection, Condition::Equalizer, Condition::PrimSupport];

    pub fn label(&self) -> &'static str {
        match self {
            Condition::ImageSum => "i",
            Condition::KernelIntersection => "ii",
            Condition::Equalizer => "iii",
            Condition::PrimSupport => "iv",
        }
    }
}

impl FromStr for Condition {
    type Err = FunctorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "i" => Ok(Condition::ImageSum),
            "ii" => Ok(Condition::KernelIntersection),
            "iii" => Ok(Condition::Equalizer),
            "iv" => Ok(Condition::PrimSupport),
            other => Err(FunctorError::BadCondition(other.to_string())),
        }
    }
}

/// Whether the columns of `m` generate the whole target module.
fn spans(m: &ExactMatrix) -> bool {
    if m.rows() == 0 {
        return true;
    }
    match m.ring() {
        RingSpec::Integers => {
            let s = smith_normal_form(m).expect("integer matrix");
            s.invariants.len() == m.rows() && s.invariants.iter().all(|d| d == &1.into())
        }
        _ => rank(m) == m.rows(),
    }
}

/// `G(ψ)` deleting element `e` from a set of size `k`.
fn kill(g: &FunctorData, k: usize, e: usize) -> ExactMatrix {
    g.action(&psi_mask(k, drop_mask(k, e))).as_ref().clone()
}

fn condition_at(g: &FunctorData, m: usize, which: Condition) -> bool {
    let ring = g.ring();
    let r = g.rank(m);
    match which {
        Condition::ImageSum => {
            let images: Vec<ExactMatrix> =
                (1..=m).map(|i| g.action(&phi_mask(m, drop_mask(m, i))).as_ref().clone()).collect();
            let refs: Vec<&ExactMatrix> = images.iter().collect();
            spans(&ExactMatrix::hstack(ring, r, &refs))
        }
        Condition::KernelIntersection => {
            let p = drop_projections(g, m);
            let refs: Vec<&ExactMatrix> = p.iter().map(|x| x.as_ref()).collect();
            rank(&ExactMatrix::vstack(ring, r, &refs)) == r
        }
        Condition::Equalizer => {
            let p = drop_projections(g, m);
            let refs: Vec<&ExactMatrix> = p.iter().map(|x| x.as_ref()).collect();
            let f = ExactMatrix::vstack(ring, r, &refs);
            let small = g.rank(m - 1);
            let tiny = if m >= 2 { g.rank(m - 2) } else { 0 };
            let pairs: Vec<(usize, usize)> = (1..=m).flat_map(|i| (i + 1..=m).map(move |j| (i, j))).collect();
            // row block (i, j): a_i restricted to I∖{i,j} minus a_j restricted there
            let mut d = ExactMatrix::zeros(ring, pairs.len() * tiny, m * small);
            for (row, &(i, j)) in pairs.iter().enumerate() {
                d = d.with_block(row * tiny, (i - 1) * small, &kill(g, m - 1, j - 1));
                d = d.with_block(row * tiny, (j - 1) * small, &-&kill(g, m - 1, i));
            }
            if rank(&f) != r || !(&d * &f).is_zero() {
                return false;
            }
            let k = kernel_basis(&d);
            match ring {
                RingSpec::Integers => solve_matrix(&f, &k).expect("shapes agree").is_some(),
                _ => k.cols() == r,
            }
        }
        Condition::PrimSupport => prim_rank(g, m) == 0,
    }
}

/// Tests one condition for every size `m` with `n < m ≤ N`. The equalizer
/// uses the natural order on `[m]`; its target is indexed by pairs `i < j`,
/// with `g₁` restricting the `i` component and `g₂` the `j` component.
pub fn check_condition(g: &FunctorData, n: usize, which: Condition) -> bool {
    (n + 1..=g.max_size()).all(|m| condition_at(g, m, which))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functorcalc::{constant_functor, ind, ind_constant, SurjFunctorData};

    #[test]
    fn constant_is_valid_and_degree_zero() {
        let g = constant_functor(RingSpec::Rationals, 3, 2);
        assert!(validate(&g).is_valid());
        assert_eq!(degree(&g), 0);
        for c in Condition::ALL {
            assert!(check_condition(&g, 0, c));
        }
    }

    #[test]
    fn corrupted_matrix_is_reported() {
        let g = ind_constant(RingSpec::Integers, 3);
        let map = PointedMap::new(2, vec![1, 1, 2]).unwrap();
        let bad = g.action(&map).scale(2);
        let report = validate(&g.with_override(map, bad));
        assert!(matches!(report.violation, Some(Violation::Composition { .. })), "{report}");
    }

    #[test]
    fn ind_constant_is_saturated() {
        let g = ind_constant(RingSpec::Integers, 4);
        assert_eq!(degree(&g), 4);
        for c in Condition::ALL {
            assert!(!check_condition(&g, 3, c));
            assert!(check_condition(&g, 4, c));
        }
    }

    #[test]
    fn support_at_two() {
        let ring = RingSpec::PrimeField(5);
        let mut ranks = vec![0; 4];
        ranks[2] = 1;
        let f = SurjFunctorData::from_fn(ring, 3, ranks.clone(), |s| {
            if s.source() == 2 && s.target() == 2 {
                ExactMatrix::identity(ring, 1)
            } else {
                ExactMatrix::zeros(ring, ranks[s.target()], ranks[s.source()])
            }
        });
        let g = ind(&f);
        assert_eq!(degree(&g), 2);
        for c in Condition::ALL {
            assert!(!check_condition(&g, 1, c), "{c:?}");
            assert!(check_condition(&g, 2, c), "{c:?}");
        }
    }
}
