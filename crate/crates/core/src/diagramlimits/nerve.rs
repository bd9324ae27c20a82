use std::collections::HashMap;

use crate::exactlin::{rank, ExactMatrix, RingSpec};
use crate::functorcalc::{all_surjections, FunctorData};
use crate::pointedsets::Surjection;

use super::LimitError;

/// Ranks of the normalized nerve cochains of `FinSetSurj_{n.e.,≤ℓ}` with
/// coefficients in `G∘ι`, and of the first two cohomology groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedLimits {
    pub ell: usize,
    pub cochain_ranks: [usize; 3],
    pub h0: usize,
    pub h1: usize,
}

/// `H⁰` and `H¹` over a field. Cochains of degree `k` are indexed by
/// strings of `k` composable non-identity surjections; `(dβ)(f, g) =
/// G(g)β(f) − β(g∘f) + β(g)`.
pub fn derived_limits(g: &FunctorData, ell: usize) -> Result<DerivedLimits, LimitError> {
    let ring = g.ring();
    if ring == RingSpec::Integers {
        return Err(LimitError::WrongRing(ring));
    }
    if ell == 0 || ell > g.max_size() {
        return Err(LimitError::BudgetExceeded { ell, max: g.max_size() });
    }
    let arrows: Vec<Surjection> =
        all_surjections(ell).into_iter().filter(|s| s.source() >= 1 && !s.is_identity()).collect();
    let index: HashMap<&Surjection, usize> = arrows.iter().enumerate().map(|(i, s)| (s, i)).collect();

    let mut c0_off = vec![0; ell + 2];
    for m in 1..=ell {
        c0_off[m + 1] = c0_off[m] + g.rank(m);
    }
    let c0 = c0_off[ell + 1];
    let mut c1_off = Vec::with_capacity(arrows.len() + 1);
    let mut acc = 0;
    for s in &arrows {
        c1_off.push(acc);
        acc += g.rank(s.target());
    }
    let c1 = acc;

    let mut d0 = ExactMatrix::zeros(ring, c1, c0);
    for (i, s) in arrows.iter().enumerate() {
        let (a, b) = (s.source(), s.target());
        d0 = d0.with_block(c1_off[i], c0_off[a], &g.action(&s.as_pointed()));
        let minus = ExactMatrix::identity(ring, g.rank(b)).scale(-1);
        d0 = if a == b {
            let sum = &*g.action(&s.as_pointed()) + &minus;
            d0.with_block(c1_off[i], c0_off[a], &sum)
        } else {
            d0.with_block(c1_off[i], c0_off[b], &minus)
        };
    }

    let pairs: Vec<(usize, usize)> = arrows
        .iter()
        .enumerate()
        .flat_map(|(i, f)| {
            arrows.iter().enumerate().filter(move |(_, h)| h.source() == f.target()).map(move |(j, _)| (i, j))
        })
        .collect();
    let c2: usize = pairs.iter().map(|&(_, j)| g.rank(arrows[j].target())).sum();
    let mut d1 = ExactMatrix::zeros(ring, c2, c1);
    let mut row = 0;
    for &(i, j) in &pairs {
        let (f, h) = (&arrows[i], &arrows[j]);
        let r = g.rank(h.target());
        d1 = d1.add_block(row, c1_off[i], &g.action(&h.as_pointed()));
        let composite = h.compose(f).expect("composable");
        if let Some(&k) = index.get(&composite) {
            d1 = d1.add_block(row, c1_off[k], &ExactMatrix::identity(ring, r).scale(-1));
        }
        d1 = d1.add_block(row, c1_off[j], &ExactMatrix::identity(ring, r));
        row += r;
    }
    let (r0, r1) = (rank(&d0), rank(&d1));
    Ok(DerivedLimits { ell, cochain_ranks: [c0, c1, c2], h0: c0 - r0, h1: c1 - r1 - r0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagramlimits::limit_over_surjections;
    use crate::functorcalc::{constant_functor, ind_constant};

    #[test]
    fn constant_h0() {
        let g = constant_functor(RingSpec::Rationals, 2, 3);
        let d = derived_limits(&g, 2).unwrap();
        assert_eq!(d.h0, 3);
    }

    #[test]
    fn h0_matches_limit() {
        for ring in [RingSpec::Rationals, RingSpec::PrimeField(2)] {
            let g = ind_constant(ring, 3);
            for ell in 1..=3 {
                assert_eq!(derived_limits(&g, ell).unwrap().h0, limit_over_surjections(&g, ell).unwrap().rank());
            }
        }
    }

    #[test]
    fn integers_are_rejected() {
        let g = constant_functor(RingSpec::Integers, 2, 1);
        assert_eq!(derived_limits(&g, 2), Err(LimitError::WrongRing(RingSpec::Integers)));
    }
}
