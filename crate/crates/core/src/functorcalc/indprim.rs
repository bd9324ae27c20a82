use std::collections::HashMap;
use std::sync::Arc;

use crate::exactlin::{intersect_kernels, is_invertible, left_inverse, split_idempotent, ExactMatrix, RingSpec};
use crate::pointedsets::{mask_elements, phi_mask, psi_mask, subsets_in_order, PointedMap, Surjection};

use super::data::{all_surjections, ActionRule, FunctorData, NatTransform, SurjFunctorData};
use super::FunctorError;

/// Start of each subset's block inside `⊕_{S ⊆ [m]} F(|S|)`, in the global
/// subset order.
pub(crate) fn block_offsets(m: usize, rank_of: impl Fn(usize) -> usize) -> (HashMap<u32, usize>, usize) {
    let mut offsets = HashMap::new();
    let mut acc = 0;
    for s in subsets_in_order(m) {
        offsets.insert(s, acc);
        acc += rank_of(s.count_ones() as usize);
    }
    (offsets, acc)
}

struct IndRule {
    f: Arc<SurjFunctorData>,
    offsets: Vec<HashMap<u32, usize>>,
    ranks: Vec<usize>,
}

impl ActionRule for IndRule {
    fn evaluate(&self, map: &PointedMap) -> ExactMatrix {
        let ring = self.f.ring();
        let (m, k) = (map.source(), map.target());
        let mut out = ExactMatrix::zeros(ring, self.ranks[k], self.ranks[m]);
        for s in subsets_in_order(m) {
            let Some((t, surj)) = map.restrict_to(s) else { continue };
            let (row, col) = (self.offsets[k][&t], self.offsets[m][&s]);
            out = if s == 0 {
                out.with_block(row, col, &ExactMatrix::identity(ring, self.f.rank(0)))
            } else {
                out.with_block(row, col, self.f.action(&surj))
            };
        }
        out
    }

    fn name(&self) -> &'static str {
        "ind"
    }
}

/// `Ind(F)`: `G({*} ⊔ I) = ⊕_{S ⊆ I} F(S)`; the `(S, T)` block of `G(ξ)` is
/// `F(S ↠ ξ(S))` when no element of `S` goes to the basepoint and `T = ξ(S)`.
pub fn ind(f: &SurjFunctorData) -> FunctorData {
    let n = f.max_size();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut ranks = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let (o, total) = block_offsets(m, |k| f.rank(k));
        offsets.push(o);
        ranks.push(total);
    }
    let rule = IndRule { f: Arc::new(f.clone()), offsets, ranks: ranks.clone() };
    FunctorData::from_rule(f.ring(), n, ranks, Arc::new(rule))
}

/// Rank 1 on nonempty sizes with identity actions, rank 0 on `∅`.
pub fn constant_surj(ring: RingSpec, max_size: usize) -> SurjFunctorData {
    let mut ranks = vec![1; max_size + 1];
    ranks[0] = 0;
    SurjFunctorData::from_fn(ring, max_size, ranks, |_| ExactMatrix::identity(ring, 1))
}

/// `Ind` of the constant functor on nonempty sets (`G({*}) = 0`).
pub fn ind_constant(ring: RingSpec, max_size: usize) -> FunctorData {
    ind(&constant_surj(ring, max_size))
}

/// `[m] ∖ {i}` as a bitmask.
pub(crate) fn drop_mask(m: usize, i: usize) -> u32 {
    ((1u32 << m) - 1) & !(1 << (i - 1))
}

/// `G(ψ_{[m]∖i, [m]})` for `i = 1..=m`.
pub(crate) fn drop_projections(g: &FunctorData, m: usize) -> Vec<Arc<ExactMatrix>> {
    (1..=m).map(|i| g.action(&psi_mask(m, drop_mask(m, i)))).collect()
}

/// `Prim(G)` together with the kernel bases it is expressed in.
#[derive(Clone, Debug)]
pub struct PrimParts {
    pub functor: SurjFunctorData,
    /// `bases[m]`: columns are a basis of `∩_i ker G(ψ_{[m]∖i})` in `G(m)`.
    pub bases: Vec<ExactMatrix>,
    /// `left[m] · bases[m] = 1`.
    pub left: Vec<ExactMatrix>,
}

/// Basis of `Prim(G)(m) = ∩_{i} ker G(ψ_{[m]∖i, [m]})`.
pub fn prim_basis(g: &FunctorData, m: usize) -> ExactMatrix {
    let projections = drop_projections(g, m);
    let refs: Vec<&ExactMatrix> = projections.iter().map(|p| p.as_ref()).collect();
    intersect_kernels(g.ring(), g.rank(m), &refs).expect("projections out of G(m)")
}

/// Rank of `Prim(G)(m)` without computing a basis.
pub fn prim_rank(g: &FunctorData, m: usize) -> usize {
    if m == 0 {
        return g.rank(0);
    }
    let projections = drop_projections(g, m);
    let refs: Vec<&ExactMatrix> = projections.iter().map(|p| p.as_ref()).collect();
    g.rank(m) - crate::exactlin::rank(&ExactMatrix::vstack(g.ring(), g.rank(m), &refs))
}

pub fn prim_parts(g: &FunctorData) -> PrimParts {
    let n = g.max_size();
    let bases: Vec<ExactMatrix> = (0..=n).map(|m| prim_basis(g, m)).collect();
    let left: Vec<ExactMatrix> =
        bases.iter().map(|k| left_inverse(k).expect("kernel bases are direct summands")).collect();
    let ranks = bases.iter().map(|k| k.cols()).collect();
    let functor = SurjFunctorData::from_fn(g.ring(), n, ranks, |s| {
        &(&left[s.target()] * &g.action(&s.as_pointed())) * &bases[s.source()]
    });
    PrimParts { functor, bases, left }
}

/// `Prim(G)` on `FinSetSurj_{≤N}`, in the kernel bases of [`prim_parts`].
pub fn prim(g: &FunctorData) -> SurjFunctorData {
    prim_parts(g).functor
}

/// One summand of `G(m) ≅ ⊕_{S ⊆ [m]} Prim(G)(S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub subset: Vec<usize>,
    pub mask: u32,
    pub basis: ExactMatrix,
}

/// Splits `G(m)` along the commuting idempotents `e_i = G(φ ψ)` for
/// `i ∈ [m]`: the `S` summand is the image of
/// `Π_{i ∈ S} (1 - e_i) · Π_{i ∉ S} e_i`.
pub fn decompose(g: &FunctorData, m: usize) -> Vec<Summand> {
    let ring = g.ring();
    let r = g.rank(m);
    let id = ExactMatrix::identity(ring, r);
    let idempotents: Vec<ExactMatrix> = (1..=m)
        .map(|i| {
            let keep = drop_mask(m, i);
            g.action(&phi_mask(m, keep).compose(&psi_mask(m, keep)).unwrap()).as_ref().clone()
        })
        .collect();
    subsets_in_order(m)
        .into_iter()
        .map(|s| {
            let mut e = id.clone();
            for (k, ei) in idempotents.iter().enumerate() {
                e = if s & (1 << k) != 0 { &e * &(&id - ei) } else { &e * ei };
            }
            let (p, _) = split_idempotent(&e).expect("products of commuting idempotents are idempotent");
            Summand { subset: mask_elements(s), mask: s, basis: p }
        })
        .collect()
}

/// The natural isomorphism `Ind(Prim G) → G`; its `S` block at size `m` is
/// `G(φ_{S,[m]}) · K_{|S|}` with `K` the Prim kernel bases.
pub fn ind_prim_isomorphism(g: &FunctorData) -> Result<(PrimParts, NatTransform), FunctorError> {
    let parts = prim_parts(g);
    let source = ind(&parts.functor);
    let components = (0..=g.max_size())
        .map(|m| {
            let blocks: Vec<ExactMatrix> = subsets_in_order(m)
                .into_iter()
                .map(|s| &*g.action(&phi_mask(m, s)) * &parts.bases[s.count_ones() as usize])
                .collect();
            let refs: Vec<&ExactMatrix> = blocks.iter().collect();
            ExactMatrix::hstack(g.ring(), g.rank(m), &refs)
        })
        .collect();
    let t = NatTransform::new(source, g.clone(), components)?;
    if let Some(m) = (0..=g.max_size()).find(|&m| !is_invertible(t.component(m))) {
        return Err(FunctorError::NotInvertible(m));
    }
    Ok((parts, t))
}

/// The isomorphism `Prim(Ind F) → F`: the `[m]` block of each kernel basis.
/// Returns the components after checking invertibility and naturality
/// against every surjection.
pub fn prim_ind_isomorphism(f: &SurjFunctorData) -> Result<Vec<ExactMatrix>, FunctorError> {
    let g = ind(f);
    let parts = prim_parts(&g);
    let n = f.max_size();
    let mut components = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let k = &parts.bases[m];
        // the subset [m] is last in the order
        let top = k.row_block(g.rank(m) - f.rank(m), f.rank(m));
        if !is_invertible(&top) {
            return Err(FunctorError::NotInvertible(m));
        }
        components.push(top);
    }
    if let Some(s) = first_unnatural_surj(&parts.functor, f, &components) {
        return Err(FunctorError::NotNatural(format!("{s:?}")));
    }
    Ok(components)
}

/// First surjection whose naturality square fails for `a → b`.
pub fn first_unnatural_surj(
    a: &SurjFunctorData,
    b: &SurjFunctorData,
    components: &[ExactMatrix],
) -> Option<Surjection> {
    all_surjections(a.max_size()).into_iter().find(|s| {
        let (m, k) = (s.source(), s.target());
        b.action(s) * &components[m] != &components[k] * a.action(s)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functorcalc::constant_functor;
    use crate::pointedsets::psi_map;

    fn linear(ring: RingSpec, n: usize) -> SurjFunctorData {
        let mut ranks = vec![0; n + 1];
        ranks[1] = 1;
        SurjFunctorData::from_fn(ring, n, ranks.clone(), |s| {
            let mut m = ExactMatrix::zeros(ring, ranks[s.target()], ranks[s.source()]);
            if s.source() == 1 {
                m = ExactMatrix::identity(ring, 1);
            }
            m
        })
    }

    #[test]
    fn ind_constant_ranks() {
        let g = ind_constant(RingSpec::Integers, 3);
        assert_eq!(g.ranks(), &[0, 1, 3, 7]);
        let z = RingSpec::Integers;
        let f = SurjFunctorData::from_fn(z, 3, vec![1; 4], |_| ExactMatrix::identity(z, 1));
        assert_eq!(ind(&f).rank(3), 8);
    }

    #[test]
    fn ind_of_size_zero_is_constant() {
        let ring = RingSpec::Rationals;
        let f = SurjFunctorData::from_fn(ring, 3, vec![1, 0, 0, 0], |_| ExactMatrix::zeros(ring, 0, 0));
        let g = ind(&f);
        assert_eq!(g.ranks(), &[1, 1, 1, 1]);
        assert!(g.action(&psi_map(3, &[2]).unwrap()).is_identity());
    }

    #[test]
    fn linear_ind_projects_coordinates() {
        let g = ind(&linear(RingSpec::Rationals, 3));
        assert_eq!(g.ranks(), &[0, 1, 2, 3]);
        let psi = g.action(&psi_map(3, &[1, 3]).unwrap());
        assert_eq!(*psi, ExactMatrix::from_i64(RingSpec::Rationals, 2, 3, &[1, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn prim_of_constant() {
        let p = prim(&constant_functor(RingSpec::Rationals, 3, 2));
        assert_eq!(p.ranks(), &[2, 0, 0, 0]);
    }

    #[test]
    fn decompose_ind_of_all_ones() {
        let ring = RingSpec::Rationals;
        let f = SurjFunctorData::from_fn(ring, 2, vec![1; 3], |_| ExactMatrix::identity(ring, 1));
        let parts = decompose(&ind(&f), 2);
        assert_eq!(parts.len(), 4);
        assert!(parts.iter().all(|s| s.basis.cols() == 1));
    }

    #[test]
    fn round_trips_on_linear() {
        let f = linear(RingSpec::Integers, 3);
        let comps = prim_ind_isomorphism(&f).unwrap();
        assert_eq!(comps.len(), 4);
        let (_, t) = ind_prim_isomorphism(&ind(&f)).unwrap();
        assert!(t.is_isomorphism());
    }
}
