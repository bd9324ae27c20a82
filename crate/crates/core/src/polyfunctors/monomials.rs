use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::diagramlimits::Diagram;
use crate::exactlin::{ExactMatrix, RingSpec};
use crate::functorcalc::{direct_sum, ActionRule, FunctorData};
use crate::pointedsets::{mask_of, special_hypercube, HypercubeSpec, PointedMap, SpecialHypercube};

use super::PolyError;

/// A monomial in the variables `x_{c,i}`, colour `c ∈ [n]`, slot `i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exponents: BTreeMap<(usize, usize), u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    /// Builds from `(colour, slot, exponent)` triples; zero exponents are dropped.
    pub fn from_powers(powers: &[(usize, usize, u32)]) -> Self {
        let mut m = Monomial::one();
        for &(c, i, e) in powers {
            if e > 0 {
                *m.exponents.entry((c, i)).or_default() += e;
            }
        }
        m
    }

    pub fn exponent(&self, colour: usize, slot: usize) -> u32 {
        self.exponents.get(&(colour, slot)).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.exponents.values().sum()
    }

    /// Nonzero exponents keyed by `(colour, slot)`.
    pub fn exponents(&self) -> &BTreeMap<(usize, usize), u32> {
        &self.exponents
    }

    /// Slots carrying a positive exponent.
    pub fn slots(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.exponents.keys().map(|&(_, i)| i).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// `x_{c,i} ↦ x_{c,ξ(i)}`, or `None` when a variable goes to the basepoint.
    pub fn substitute(&self, xi: &PointedMap) -> Option<Monomial> {
        let mut out = Monomial::one();
        for (&(c, i), &e) in &self.exponents {
            let j = xi.apply(i);
            if j == 0 {
                return None;
            }
            *out.exponents.entry((c, j)).or_default() += e;
        }
        Some(out)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|(&(c, i), &e)| if e == 1 { format!("x{c}_{i}") } else { format!("x{c}_{i}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Degree-`d` monomials in `n · size` variables. Variables are ordered
/// colour-major (`x_{1,1}, …, x_{1,size}, x_{2,1}, …`) and monomials by
/// descending exponent vectors, so `x₁² , x₁x₂, x₂²` for `n = 1, size = 2`.
pub fn monomial_basis(n: usize, size: usize, d: usize) -> Vec<Monomial> {
    let vars: Vec<(usize, usize)> = (1..=n).flat_map(|c| (1..=size).map(move |i| (c, i))).collect();
    let mut out = Vec::new();
    let mut exps = vec![0u32; vars.len()];
    fill(&vars, &mut exps, 0, d as u32, &mut out);
    out
}

fn fill(vars: &[(usize, usize)], exps: &mut [u32], k: usize, left: u32, out: &mut Vec<Monomial>) {
    if k == vars.len() {
        if left == 0 {
            let powers: Vec<(usize, usize, u32)> =
                vars.iter().zip(exps.iter()).map(|(&(c, i), &e)| (c, i, e)).collect();
            out.push(Monomial::from_powers(&powers));
        }
        return;
    }
    for e in (0..=left).rev() {
        exps[k] = e;
        fill(vars, exps, k + 1, left - e, out);
    }
    exps[k] = 0;
}

struct SubstitutionRule {
    ring: RingSpec,
    bases: Vec<Vec<Monomial>>,
    index: Vec<HashMap<Monomial, usize>>,
}

impl ActionRule for SubstitutionRule {
    fn evaluate(&self, map: &PointedMap) -> ExactMatrix {
        let (m, k) = (map.source(), map.target());
        let mut out = ExactMatrix::zeros(self.ring, self.bases[k].len(), self.bases[m].len());
        for (col, mono) in self.bases[m].iter().enumerate() {
            if let Some(image) = mono.substitute(map) {
                out.set_i64(self.index[k][&image], col, 1);
            }
        }
        out
    }

    fn name(&self) -> &'static str {
        "P"
    }
}

/// Homogeneous polynomials of degree `d` in `x_{c,i}`, `c ∈ [n]`, `i ∈ I`.
pub fn build_p(ring: RingSpec, n: usize, d: usize, max_size: usize) -> FunctorData {
    let bases: Vec<Vec<Monomial>> = (0..=max_size).map(|m| monomial_basis(n, m, d)).collect();
    let index = bases.iter().map(|b| b.iter().cloned().enumerate().map(|(k, v)| (v, k)).collect()).collect();
    let ranks = bases.iter().map(Vec::len).collect();
    FunctorData::from_rule(ring, max_size, ranks, Arc::new(SubstitutionRule { ring, bases, index }))
}

/// `⊕_{e=0..d} P_{n,e}`, lowest degree first.
pub fn build_p_le(ring: RingSpec, n: usize, d: usize, max_size: usize) -> FunctorData {
    let parts: Vec<FunctorData> = (0..=d).map(|e| build_p(ring, n, e, max_size)).collect();
    let refs: Vec<&FunctorData> = parts.iter().collect();
    direct_sum(&refs).expect("at least the degree-0 part")
}

/// The one-dimensional sub-diagram spanned by a top-vertex monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPiece {
    pub monomial: Monomial,
    /// Blocks `b` whose slots carry a variable of the monomial.
    pub support: u32,
    /// Basis index of the image at each vertex, `None` where it is zero.
    pub images: BTreeMap<u32, Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDecomposition {
    pub n: usize,
    pub d: usize,
    pub spec: HypercubeSpec,
    pub pieces: Vec<OrbitPiece>,
    /// At every vertex the nonzero images are distinct and exhaust the basis.
    pub reassembles: bool,
    /// Every cube arrow of `P` maps each piece into itself by the identity.
    pub matches_action: bool,
    /// Each piece is nonzero exactly at the vertices containing its support.
    pub supported_as_claimed: bool,
    /// `B_m ⊊ B` for every piece (only required when `|B| > d`).
    pub supports_proper: bool,
    /// Every square of every piece is cartesian.
    pub strongly_cartesian: bool,
    /// First non-cartesian square `(piece index, v, b, c)`, if any.
    pub square_witness: Option<(usize, u32, usize, usize)>,
    /// Every piece has its initial vertex as the limit of the rest.
    pub weakly_cartesian: bool,
}

impl OrbitDecomposition {
    /// All checks, with properness required only when `|B| > d`.
    pub fn certified(&self) -> bool {
        self.reassembles
            && self.matches_action
            && self.supported_as_claimed
            && self.strongly_cartesian
            && (self.supports_proper || self.spec.dimension() <= self.d)
    }

    /// The same checks with weak cartesianness of each piece in place of
    /// the square condition.
    pub fn certified_weak(&self) -> bool {
        self.reassembles
            && self.matches_action
            && self.supported_as_claimed
            && self.weakly_cartesian
            && (self.supports_proper || self.spec.dimension() <= self.d)
    }
}

/// Splits `P_{n,d}(Ξ_spec)` into the sub-diagrams spanned by monomials and
/// certifies each against the substitution matrices.
pub fn monomial_orbit_decomposition(n: usize, d: usize, spec: &HypercubeSpec) -> Result<OrbitDecomposition, PolyError> {
    if n == 0 {
        return Err(PolyError::NoColours);
    }
    let ring = RingSpec::Rationals;
    let cube = special_hypercube(spec);
    let total = spec.total();
    let p = build_p(ring, n, d, total);
    let vertices = cube.vertices();
    let bases: HashMap<u32, Vec<Monomial>> =
        vertices.iter().map(|&v| (v, monomial_basis(n, cube.vertex_size(v), d))).collect();
    let block_of_slot: Vec<usize> =
        spec.blocks().iter().enumerate().flat_map(|(b, &len)| std::iter::repeat_n(b + 1, len)).collect();

    let mut pieces = Vec::new();
    for mono in monomial_basis(n, total, d) {
        let blocks: Vec<usize> = mono.slots().iter().map(|&i| block_of_slot[i - 1]).collect();
        let support = mask_of(&blocks);
        let images = vertices
            .iter()
            .map(|&v| {
                let image = mono.substitute(&cube.arrow(cube.top(), v));
                (v, image.map(|m| bases[&v].iter().position(|x| *x == m).expect("image is a basis monomial")))
            })
            .collect();
        pieces.push(OrbitPiece { monomial: mono, support, images });
    }

    let mut reassembles = true;
    for &v in &vertices {
        let mut hit = vec![0usize; bases[&v].len()];
        for piece in &pieces {
            if let Some(k) = piece.images[&v] {
                hit[k] += 1;
            }
        }
        reassembles &= hit.iter().all(|&c| c == 1);
    }

    let mut matches_action = true;
    for (from, to) in cube.edges() {
        let a = p.action(&cube.arrow(from, to));
        for piece in &pieces {
            if let Some(k) = piece.images[&from] {
                let mut expected = ExactMatrix::zeros(ring, a.rows(), 1);
                if let Some(j) = piece.images[&to] {
                    expected.set_i64(j, 0, 1);
                }
                matches_action &= a.column(k) == expected;
            }
        }
    }

    let supported_as_claimed =
        pieces.iter().all(|pc| pc.images.iter().all(|(&v, img)| img.is_some() == (v & pc.support == pc.support)));
    let supports_proper = pieces.iter().all(|pc| pc.support != cube.top());

    let mut square_witness = None;
    for (k, piece) in pieces.iter().enumerate() {
        for (v, b, c) in cube.squares() {
            let (vb, vc) = (v & !(1 << b), v & !(1 << c));
            if square_witness.is_none() && !piece_is_cartesian(ring, &cube, piece, v, &[vb, vc, vb & vc]) {
                square_witness = Some((k, v, b, c));
            }
        }
    }
    let rest: Vec<u32> = vertices.iter().copied().filter(|&v| v != cube.top()).collect();
    let weakly_cartesian = pieces.iter().all(|pc| piece_is_cartesian(ring, &cube, pc, cube.top(), &rest));

    Ok(OrbitDecomposition {
        n,
        d,
        spec: spec.clone(),
        pieces,
        reassembles,
        matches_action,
        supported_as_claimed,
        supports_proper,
        strongly_cartesian: square_witness.is_none(),
        square_witness,
        weakly_cartesian,
    })
}

/// Rank check for a piece: `k` or `0` at each vertex, identities between
/// copies of `k`; is `source` the limit of the sub-diagram on `below`?
fn piece_is_cartesian(ring: RingSpec, cube: &SpecialHypercube, piece: &OrbitPiece, source: u32, below: &[u32]) -> bool {
    let r = |x: u32| piece.images[&x].is_some() as usize;
    let arrow = |from: u32, to: u32| {
        if r(from) == 1 && r(to) == 1 {
            ExactMatrix::identity(ring, 1)
        } else {
            ExactMatrix::zeros(ring, r(to), r(from))
        }
    };
    let mut d = Diagram::new(ring);
    let index: HashMap<u32, usize> = below.iter().map(|&v| (v, d.add_vertex(r(v)))).collect();
    for (from, to) in cube.edges() {
        if let (Some(&a), Some(&b)) = (index.get(&from), index.get(&to)) {
            d.add_edge(a, b, arrow(from, to)).expect("shapes");
        }
    }
    let basis = d.limit();
    let legs: Vec<ExactMatrix> = below.iter().map(|&v| arrow(source, v)).collect();
    let refs: Vec<&ExactMatrix> = legs.iter().collect();
    let cone = ExactMatrix::vstack(ring, r(source), &refs);
    match d.limit_coordinates(&basis, &cone) {
        Some(x) => x.is_square() && crate::exactlin::is_invertible(&x),
        None => false,
    }
}
