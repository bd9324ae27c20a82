use crate::exactlin::{kernel_basis, rank, solve_matrix, ExactMatrix, RingSpec};
use crate::functorcalc::{all_surjections, decompose, degree, ind_prim_isomorphism, prim_rank, FunctorData};
use crate::pointedsets::{phi_mask, psi_mask, subsets_in_order, surjection_generators, Surjection};

use super::{is_iso, Diagram, LimitError};

/// Which compatibility equations define the limit. Both give the same
/// module; the generator system is much smaller.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Constraints {
    #[default]
    Generators,
    AllSurjections,
}

/// `lim_{FinSetSurj_{n.e.,≤ℓ}} G∘ι` inside `⊕_{m=1..ℓ} G(m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitResult {
    pub ring: RingSpec,
    pub ell: usize,
    /// Columns span the limit; rows are the sizes `1..=ℓ` stacked in order.
    pub basis: ExactMatrix,
    /// `G(ψ_{∅,[1]})` applied to the size-1 component of each basis column.
    pub comparison: ExactMatrix,
    /// `offsets[m-1]` is the first row of size `m`; the last entry is the total.
    pub offsets: Vec<usize>,
}

impl LimitResult {
    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// Rows of the basis belonging to size `m`.
    pub fn component(&self, m: usize) -> ExactMatrix {
        let (a, b) = (self.offsets[m - 1], self.offsets[m]);
        self.basis.row_block(a, b - a)
    }

    pub fn comparison_is_iso(&self) -> bool {
        is_iso(&self.comparison)
    }

    pub fn comparison_is_injective(&self) -> bool {
        rank(&self.comparison) == self.rank()
    }
}

/// The diagram of `G∘ι` on sizes `1..=ℓ` (vertex `m-1` is size `m`).
pub fn surjection_diagram(g: &FunctorData, ell: usize, constraints: Constraints) -> Result<Diagram, LimitError> {
    if ell == 0 || ell > g.max_size() {
        return Err(LimitError::BudgetExceeded { ell, max: g.max_size() });
    }
    let mut d = Diagram::new(g.ring());
    for m in 1..=ell {
        d.add_vertex(g.rank(m));
    }
    let arrows: Vec<Surjection> = match constraints {
        Constraints::Generators => surjection_generators(ell),
        Constraints::AllSurjections => {
            all_surjections(ell).into_iter().filter(|s| s.source() >= 1 && !s.is_identity()).collect()
        }
    };
    for s in arrows {
        d.add_edge(s.source() - 1, s.target() - 1, g.action(&s.as_pointed()).as_ref().clone())?;
    }
    Ok(d)
}

pub fn limit_over_surjections(g: &FunctorData, ell: usize) -> Result<LimitResult, LimitError> {
    limit_over_surjections_with(g, ell, Constraints::Generators)
}

pub fn limit_over_surjections_with(
    g: &FunctorData,
    ell: usize,
    constraints: Constraints,
) -> Result<LimitResult, LimitError> {
    let d = surjection_diagram(g, ell, constraints)?;
    let basis = d.limit();
    let mut offsets = d.offsets();
    offsets.push(d.total_rank());
    let size_one = basis.row_block(0, g.rank(1));
    let comparison = &*g.action(&psi_mask(1, 0)) * &size_one;
    Ok(LimitResult { ring: g.ring(), ell, basis, comparison, offsets })
}

/// The map `lim_{≤ℓ} → lim_{≤ℓ'}` in the computed bases.
pub fn restriction_map(g: &FunctorData, ell: usize, ell_small: usize) -> Result<ExactMatrix, LimitError> {
    if ell_small > ell {
        return Err(LimitError::PreconditionViolated(format!("restriction needs {ell_small} <= {ell}")));
    }
    let big = limit_over_surjections(g, ell)?;
    let small = limit_over_surjections(g, ell_small)?;
    let truncated = big.basis.row_block(0, small.basis.rows());
    solve_matrix(&small.basis, &truncated)?
        .ok_or_else(|| LimitError::PreconditionViolated("truncated family left the limit".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingVerdict {
    pub ell: usize,
    pub limit_rank: usize,
    pub base_rank: usize,
    pub iso: bool,
    /// A nonzero limit family mapping to zero, if there is one.
    pub kernel_witness: Option<ExactMatrix>,
    /// A basis vector of `G(∅)` outside the image, if the map is injective
    /// but not onto.
    pub cokernel_witness: Option<ExactMatrix>,
}

/// Checks `lim_{≤ℓ} G∘ι ≅ G({*})` for `deg G ≤ n` and `n + 2 ≤ ℓ ≤ N`.
pub fn check_vanishing(g: &FunctorData, n: usize, ell: usize) -> Result<VanishingVerdict, LimitError> {
    if ell > g.max_size() || ell == 0 {
        return Err(LimitError::BudgetExceeded { ell, max: g.max_size() });
    }
    let deg = degree(g);
    if deg > n {
        return Err(LimitError::PreconditionViolated(format!("degree {deg} exceeds {n}")));
    }
    if ell < n + 2 {
        return Err(LimitError::PreconditionViolated(format!("truncation {ell} is below n + 2 = {}", n + 2)));
    }
    let lim = limit_over_surjections(g, ell)?;
    let iso = lim.comparison_is_iso();
    let k = kernel_basis(&lim.comparison);
    let kernel_witness = (k.cols() > 0).then(|| &lim.basis * &k.col_block(0, 1));
    let cokernel_witness = if iso || k.cols() > 0 {
        None
    } else {
        let base = g.rank(0);
        (0..base)
            .map(|i| ExactMatrix::identity(g.ring(), base).col_block(i, 1))
            .find(|e| solve_matrix(&lim.comparison, e).ok().flatten().is_none())
    };
    Ok(VanishingVerdict { ell, limit_rank: lim.rank(), base_rank: g.rank(0), iso, kernel_witness, cokernel_witness })
}

/// The family that is 1 on the `S = I` coordinate of each `G(I)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleFamily {
    pub ell: usize,
    /// Stacked over sizes `1..=ℓ`.
    pub family: ExactMatrix,
    /// Every surjection among sizes `1..=ℓ` carries `a_I` to `a_J`.
    pub compatible: bool,
    pub comparison_zero: bool,
    pub nonzero: bool,
    pub surjections_checked: usize,
}

/// Builds the unit-on-the-top-subset family for `G = Ind(F)` with `F` of
/// rank 1 on nonempty sets (the top subset `[m]` is the last coordinate),
/// and verifies it against every surjection independently of any solver.
pub fn counterexample_family(g: &FunctorData, ell: usize) -> Result<CounterexampleFamily, LimitError> {
    if ell == 0 || ell > g.max_size() {
        return Err(LimitError::BudgetExceeded { ell, max: g.max_size() });
    }
    let ring = g.ring();
    let unit = |m: usize| {
        let r = g.rank(m);
        let mut v = ExactMatrix::zeros(ring, r, 1);
        if r > 0 {
            v.set_i64(r - 1, 0, 1);
        }
        v
    };
    let parts: Vec<ExactMatrix> = (1..=ell).map(unit).collect();
    let refs: Vec<&ExactMatrix> = parts.iter().collect();
    let family = ExactMatrix::vstack(ring, 1, &refs);
    let mut checked = 0;
    let mut compatible = true;
    for s in all_surjections(ell).into_iter().filter(|s| s.source() >= 1) {
        checked += 1;
        if &*g.action(&s.as_pointed()) * &parts[s.source() - 1] != parts[s.target() - 1] {
            compatible = false;
            break;
        }
    }
    let comparison_zero = (&*g.action(&psi_mask(1, 0)) * &parts[0]).is_zero();
    Ok(CounterexampleFamily {
        ell,
        nonzero: !family.is_zero(),
        family,
        compatible,
        comparison_zero,
        surjections_checked: checked,
    })
}

/// Coordinates `b_{S,[d]}` of families along `G ≅ Ind(Prim G)`, traced
/// through the downward induction on `|S|` driven by `ξ: [d+1] ↠ [d]`,
/// `i ↦ min(i, d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateTrace {
    pub n: usize,
    pub ell: usize,
    /// Rank of the permutation-invariant families on sizes `1..=ℓ`.
    pub invariant_rank: usize,
    pub limit_rank: usize,
    /// Invariant families have `b_{S,[d]}` depending only on `|S|`.
    pub symmetric: bool,
    /// The blocks `G(φ_S)·Prim(G)(|S|)` agree with the summands of `decompose`.
    pub decompose_agrees: bool,
    /// An `m`-subset `J ⊆ [d]` has one `m`-element preimage if `d ∉ J`, two if `d ∈ J`.
    pub preimage_counts_ok: bool,
    /// On invariant families the `J` block of `G(ξ)a_{[d+1]}` is
    /// `c·b_{m,[d+1]}` (`c` the preimage count) plus the contributions of
    /// `(m+1)`-subsets through `Prim(G)`.
    pub block_formula_ok: bool,
    pub block_checks: usize,
    /// On limit families: `b_{m,[d]} = b_{m,[d+1]} = 2 b_{m,[d+1]}` for
    /// `m < d ≤ n+1` and `b_{m,[m]} = 2 b_{m,[m+1]}`.
    pub equations_ok: bool,
    pub equations_checked: usize,
    /// `b_{m,[d]} = 0` for every `m ≥ 1` on limit families.
    pub vanishing: bool,
}

/// Per-size, per-cardinality coordinates of one family.
type Coords = Vec<Vec<ExactMatrix>>;

pub fn coordinate_trace(g: &FunctorData, n: usize, ell: usize) -> Result<CoordinateTrace, LimitError> {
    let deg = degree(g);
    if deg > n {
        return Err(LimitError::PreconditionViolated(format!("degree {deg} exceeds {n}")));
    }
    if ell < n + 2 || ell > g.max_size() {
        return Err(LimitError::PreconditionViolated(format!(
            "truncation {ell} must lie in {}..={}",
            n + 2,
            g.max_size()
        )));
    }
    let ring = g.ring();
    let (parts, iso) = ind_prim_isomorphism(g)?;
    let pr: Vec<usize> = (0..=ell).map(|m| prim_rank(g, m)).collect();

    let mut decompose_agrees = true;
    for d in 1..=ell {
        for s in decompose(g, d) {
            let m = s.mask.count_ones() as usize;
            let block = &*g.action(&phi_mask(d, s.mask)) * &parts.bases[m];
            decompose_agrees &= s.basis.cols() == pr[m] && solve_matrix(&s.basis, &block)?.is_some();
        }
    }

    let mut preimage_counts_ok = true;
    for d in 1..ell {
        for j in subsets_in_order(d).into_iter().filter(|&j| j != 0) {
            let m = j.count_ones();
            let count = subsets_in_order(d + 1)
                .into_iter()
                .filter(|&s| s.count_ones() == m && collapse_image(s, d) == j)
                .count();
            preimage_counts_ok &= count == if j & (1 << (d - 1)) != 0 { 2 } else { 1 };
        }
    }

    // raw Ind(Prim G) coordinates of a vector in G(d), keyed by subset
    let split = |d: usize, a: &ExactMatrix| -> Vec<(u32, ExactMatrix)> {
        let c = solve_matrix(iso.component(d), a).expect("shapes agree").expect("invertible");
        let mut row = 0;
        subsets_in_order(d)
            .into_iter()
            .map(|s| {
                let k = pr[s.count_ones() as usize];
                row += k;
                (s, c.row_block(row - k, k))
            })
            .collect()
    };
    let mut symmetric = true;
    let mut by_card = |d: usize, a: &ExactMatrix| -> Vec<ExactMatrix> {
        let mut out: Vec<Option<ExactMatrix>> = vec![None; d + 1];
        for (s, b) in split(d, a) {
            let m = s.count_ones() as usize;
            match &out[m] {
                Some(prev) => symmetric &= *prev == b,
                None => out[m] = Some(b),
            }
        }
        out.into_iter().map(|b| b.expect("every cardinality occurs")).collect()
    };

    let mut perms = Diagram::new(ring);
    for m in 1..=ell {
        perms.add_vertex(g.rank(m));
    }
    for s in surjection_generators(ell).into_iter().filter(|s| s.source() == s.target()) {
        perms.add_edge(s.source() - 1, s.source() - 1, g.action(&s.as_pointed()).as_ref().clone())?;
    }
    let invariant = perms.limit();
    let mut offsets = perms.offsets();
    offsets.push(perms.total_rank());
    let component = |basis: &ExactMatrix, k: usize, d: usize| {
        basis.col_block(k, 1).row_block(offsets[d - 1], offsets[d] - offsets[d - 1])
    };

    let mut block_formula_ok = true;
    let mut block_checks = 0;
    for k in 0..invariant.cols() {
        let fam: Coords = (1..=ell).map(|d| by_card(d, &component(&invariant, k, d))).collect();
        for d in 1..ell {
            let xi = crate::pointedsets::collapse_map(d).as_pointed();
            let pushed = &*g.action(&xi) * &component(&invariant, k, d + 1);
            for (j, y) in split(d, &pushed).into_iter().filter(|(j, _)| *j != 0) {
                let m = j.count_ones() as usize;
                let c = if j & (1 << (d - 1)) != 0 { 2 } else { 1 };
                let mut expected = fam[d][m].scale(c);
                if m < d + 1 {
                    for s in subsets_in_order(d + 1).into_iter().filter(|&s| s.count_ones() as usize == m + 1) {
                        if let Some((t, surj)) = xi.restrict_to(s) {
                            if t == j {
                                expected = &expected + &(parts.functor.action(&surj) * &fam[d][m + 1]);
                            }
                        }
                    }
                }
                block_checks += 1;
                block_formula_ok &= y == expected;
            }
        }
    }

    let lim = limit_over_surjections(g, ell)?;
    let mut equations_ok = true;
    let mut equations_checked = 0;
    let mut vanishing = true;
    for k in 0..lim.rank() {
        let fam: Coords = (1..=ell).map(|d| by_card(d, &lim.component(d).col_block(k, 1))).collect();
        let b = |m: usize, d: usize| &fam[d - 1][m];
        for m in 1..=n.min(ell - 1) {
            for d in m..=(n + 1).min(ell - 1) {
                equations_checked += 1;
                let twice = b(m, d + 1).scale(2);
                equations_ok &= if d > m { b(m, d) == b(m, d + 1) && *b(m, d) == twice } else { *b(m, d) == twice };
            }
        }
        for d in 1..=ell {
            vanishing &= (1..=d).all(|m| b(m, d).is_zero());
        }
    }
    Ok(CoordinateTrace {
        n,
        ell,
        invariant_rank: invariant.cols(),
        limit_rank: lim.rank(),
        symmetric,
        decompose_agrees,
        preimage_counts_ok,
        block_formula_ok,
        block_checks,
        equations_ok,
        equations_checked,
        vanishing,
    })
}

/// Image of a subset of `[d+1]` under `i ↦ min(i, d)`.
fn collapse_image(s: u32, d: usize) -> u32 {
    let top = 1u32 << d;
    if s & top != 0 {
        (s & !top) | (1 << (d - 1))
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functorcalc::{constant_functor, ind, ind_constant, SurjFunctorData};

    fn linear(ring: RingSpec, n: usize) -> FunctorData {
        let mut ranks = vec![0; n + 1];
        ranks[1] = 1;
        ind(&SurjFunctorData::from_fn(ring, n, ranks.clone(), |s| {
            if s.source() == 1 {
                ExactMatrix::identity(ring, 1)
            } else {
                ExactMatrix::zeros(ring, ranks[s.target()], ranks[s.source()])
            }
        }))
    }

    #[test]
    fn constant_limit_is_base() {
        let g = constant_functor(RingSpec::Rationals, 3, 1);
        let lim = limit_over_surjections(&g, 3).unwrap();
        assert_eq!(lim.rank(), 1);
        assert!(lim.comparison_is_iso());
        assert!(check_vanishing(&g, 0, 2).unwrap().iso);
    }

    #[test]
    fn generators_match_all_surjections() {
        for ring in [RingSpec::Rationals, RingSpec::Integers, RingSpec::PrimeField(3)] {
            let g = ind_constant(ring, 3);
            for ell in 1..=3 {
                let a = limit_over_surjections_with(&g, ell, Constraints::Generators).unwrap();
                let b = limit_over_surjections_with(&g, ell, Constraints::AllSurjections).unwrap();
                assert_eq!(a.rank(), b.rank());
                assert!(solve_matrix(&a.basis, &b.basis).unwrap().is_some());
            }
        }
    }

    #[test]
    fn ind_constant_is_not_injective() {
        let g = ind_constant(RingSpec::Integers, 3);
        for ell in 1..=3 {
            let lim = limit_over_surjections(&g, ell).unwrap();
            assert!(lim.rank() >= 1);
            assert!(!lim.comparison_is_injective());
            let fam = counterexample_family(&g, ell).unwrap();
            assert!(fam.compatible && fam.comparison_zero && fam.nonzero);
            for small in 1..=ell {
                assert!(!restriction_map(&g, ell, small).unwrap().is_zero());
            }
        }
        assert!(matches!(check_vanishing(&g, 2, 3), Err(LimitError::PreconditionViolated(_))));
    }

    #[test]
    fn linear_limit_vanishes() {
        let g = linear(RingSpec::Rationals, 3);
        assert_eq!(limit_over_surjections(&g, 3).unwrap().rank(), 0);
        assert_eq!(limit_over_surjections(&g, 1).unwrap().rank(), 1);
        let r = restriction_map(&g, 3, 1).unwrap();
        assert_eq!(r.shape(), (1, 0));
        let v = check_vanishing(&g, 1, 3).unwrap();
        assert!(v.iso && v.limit_rank == 0);
    }

    #[test]
    fn restriction_to_itself_is_identity() {
        let g = ind_constant(RingSpec::Rationals, 3);
        assert!(restriction_map(&g, 2, 2).unwrap().is_identity());
    }

    #[test]
    fn budget_errors() {
        let g = constant_functor(RingSpec::Rationals, 2, 1);
        assert!(matches!(limit_over_surjections(&g, 3), Err(LimitError::BudgetExceeded { .. })));
        assert!(matches!(limit_over_surjections(&g, 0), Err(LimitError::BudgetExceeded { .. })));
    }

    #[test]
    fn coordinate_trace_on_linear() {
        let g = linear(RingSpec::Integers, 3);
        let t = coordinate_trace(&g, 1, 3).unwrap();
        assert!(t.symmetric && t.decompose_agrees && t.preimage_counts_ok && t.equations_ok && t.vanishing);
        assert!(t.block_formula_ok && t.block_checks > 0 && t.invariant_rank > 0);
    }

    #[test]
    fn collapse_image_of_subsets() {
        assert_eq!(collapse_image(0b100, 2), 0b10);
        assert_eq!(collapse_image(0b110, 2), 0b10);
        assert_eq!(collapse_image(0b001, 2), 0b01);
    }
}
