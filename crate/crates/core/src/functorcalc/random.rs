//! Seeded random functors on surjections, built from functorial blocks and
//! then disguised by random changes of basis.
//!
//! Each block is a known functor restricted to an interval of sizes
//! `[lo, hi]`; zeroing everything outside an interval of sizes is again
//! functorial because surjections never increase size.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::exactlin::{inverse, ExactMatrix, RingSpec};
use crate::pointedsets::{subsets_in_order, Surjection};

use super::data::{FunctorData, SurjFunctorData};
use super::indprim::ind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockKind {
    /// `F(∅)`, with only the identity acting.
    Empty,
    /// Rank 1, every surjection acts by 1.
    Constant,
    /// `k[I]` with pushforward of basis vectors.
    Linear,
    /// Free on `r`-element subsets; a subset whose image is smaller dies.
    Subsets(usize),
    /// Sum-zero vectors in `k[I]`, basis `e_i - e_{|I|}`.
    SumZero,
    /// A representation of `S_s` placed at the single size `s`.
    Trivial(usize),
    Sign(usize),
    Permutation(usize),
    Standard(usize),
}

impl BlockKind {
    fn base_rank(&self, m: usize) -> usize {
        match *self {
            BlockKind::Empty => usize::from(m == 0),
            BlockKind::Constant | BlockKind::Trivial(_) | BlockKind::Sign(_) => 1,
            BlockKind::Linear | BlockKind::Permutation(_) => m,
            BlockKind::Subsets(r) => binomial(m, r),
            BlockKind::SumZero | BlockKind::Standard(_) => m.saturating_sub(1),
        }
    }

    fn base_action(&self, ring: RingSpec, s: &Surjection) -> ExactMatrix {
        let (m, k) = (s.source(), s.target());
        let img = |i: usize| s.images()[i - 1];
        let mut out = ExactMatrix::zeros(ring, self.base_rank(k), self.base_rank(m));
        match *self {
            BlockKind::Empty => {}
            BlockKind::Constant | BlockKind::Trivial(_) => out.set_i64(0, 0, 1),
            BlockKind::Sign(_) => out.set_i64(0, 0, permutation_sign(s.images())),
            BlockKind::Linear | BlockKind::Permutation(_) => {
                for i in 1..=m {
                    out.set_i64(img(i) - 1, i - 1, 1);
                }
            }
            BlockKind::Subsets(r) => {
                let src = r_subsets(m, r);
                let dst = r_subsets(k, r);
                for (col, a) in src.iter().enumerate() {
                    let b = a.iter().fold(0u32, |acc, &i| acc | 1 << (img(i) - 1));
                    if b.count_ones() as usize == r {
                        let row = dst.iter().position(|d| mask(d) == b).unwrap();
                        out.set_i64(row, col, 1);
                    }
                }
            }
            BlockKind::SumZero | BlockKind::Standard(_) => {
                // e_i - e_m pushes forward to e_{ξ(i)} - e_{ξ(m)}; a sum-zero
                // vector has coordinates given by its first k-1 entries
                for i in 1..m {
                    let (a, b) = (img(i), img(m));
                    if a != b {
                        if a < k {
                            out.set_i64(a - 1, i - 1, 1);
                        }
                        if b < k {
                            out.set_i64(b - 1, i - 1, -1);
                        }
                    }
                }
            }
        }
        out
    }
}

fn mask(elements: &[usize]) -> u32 {
    elements.iter().fold(0, |acc, &i| acc | 1 << (i - 1))
}

fn r_subsets(m: usize, r: usize) -> Vec<Vec<usize>> {
    subsets_in_order(m)
        .into_iter()
        .filter(|s| s.count_ones() as usize == r)
        .map(crate::pointedsets::mask_elements)
        .collect()
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn permutation_sign(images: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if images[i] > images[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// One summand of a random functor: a block kind living on sizes `lo..=hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub kind: BlockKind,
    pub lo: usize,
    pub hi: usize,
    /// Rank of the block at each size `0..=N`.
    pub ranks: Vec<usize>,
    /// Offset of the block inside `F(m)` before the change of basis.
    pub offsets: Vec<usize>,
}

impl Block {
    fn active(&self, m: usize) -> bool {
        self.lo <= m && m <= self.hi
    }
}

#[derive(Clone, Debug)]
pub struct RandomOptions {
    /// Upper bound on `rank F(m)` at every size.
    pub max_rank: usize,
    /// `F` vanishes on sizes above this.
    pub support: usize,
    /// Allow `F(∅) ≠ 0`.
    pub allow_empty: bool,
    pub max_blocks: usize,
    /// Apply a random change of basis at every size.
    pub conjugate: bool,
}

impl Default for RandomOptions {
    fn default() -> Self {
        RandomOptions { max_rank: 3, support: usize::MAX, allow_empty: true, max_blocks: 4, conjugate: true }
    }
}

/// A random surjection functor with the blocks it was assembled from.
#[derive(Clone, Debug)]
pub struct RandomSurj {
    pub functor: SurjFunctorData,
    pub blocks: Vec<Block>,
    /// `changes[m]` maps block coordinates to the coordinates of `functor`.
    pub changes: Vec<ExactMatrix>,
}

impl RandomSurj {
    /// The natural endomorphism acting on block `b` by `scalars[b]`.
    pub fn block_scalar_endomorphism(&self, scalars: &[i64]) -> Vec<ExactMatrix> {
        let ring = self.functor.ring();
        (0..=self.functor.max_size())
            .map(|m| {
                let r = self.functor.rank(m);
                let mut d = ExactMatrix::zeros(ring, r, r);
                for (b, block) in self.blocks.iter().enumerate() {
                    for k in 0..block.ranks[m] {
                        d.set_i64(block.offsets[m] + k, block.offsets[m] + k, scalars[b]);
                    }
                }
                let inv = inverse(&self.changes[m]).expect("changes are invertible");
                &(&self.changes[m] * &d) * &inv
            })
            .collect()
    }
}

/// A random matrix invertible over the ring (unimodular over Z): a product of
/// elementary row operations with small coefficients, then a row shuffle.
pub fn random_unimodular<R: Rng + ?Sized>(ring: RingSpec, n: usize, rng: &mut R) -> ExactMatrix {
    let mut m = ExactMatrix::identity(ring, n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            m = m.scale(-1);
        }
        return m;
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = *[-2i64, -1, 1, 2].choose(rng).unwrap();
        m.add_row_multiple(i, j, c);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    m.select_rows(&order)
}

fn candidate_kind<R: Rng + ?Sized>(support: usize, rng: &mut R) -> (BlockKind, usize, usize) {
    let s = rng.gen_range(1..=support);
    match rng.gen_range(0..9) {
        0 | 1 => {
            let lo = rng.gen_range(1..=support);
            let hi = rng.gen_range(lo..=support);
            (BlockKind::Constant, lo, hi)
        }
        2 => {
            let lo = rng.gen_range(1..=support);
            (BlockKind::Linear, lo, rng.gen_range(lo..=support))
        }
        3 => {
            let r = rng.gen_range(1..=support.min(3));
            (BlockKind::Subsets(r), r, rng.gen_range(r..=support))
        }
        4 => {
            let lo = rng.gen_range(2.min(support)..=support);
            (BlockKind::SumZero, lo.max(2), rng.gen_range(lo.max(2)..=support.max(2)))
        }
        5 => (BlockKind::Trivial(s), s, s),
        6 => (BlockKind::Sign(s), s, s),
        7 => (BlockKind::Permutation(s), s, s),
        _ => (BlockKind::Standard(s), s, s),
    }
}

/// A random functor on `FinSetSurj_{≤N}` with ranks `≤ max_rank` vanishing
/// above `support`.
pub fn random_surj_functor<R: Rng + ?Sized>(
    ring: RingSpec,
    max_size: usize,
    opts: &RandomOptions,
    rng: &mut R,
) -> RandomSurj {
    let support = opts.support.min(max_size);
    let mut used = vec![0usize; max_size + 1];
    let mut blocks: Vec<Block> = Vec::new();
    let mut push = |kind: BlockKind, lo: usize, hi: usize, used: &mut Vec<usize>| {
        let ranks: Vec<usize> =
            (0..=max_size).map(|m| if lo <= m && m <= hi { kind.base_rank(m) } else { 0 }).collect();
        if ranks.iter().all(|&r| r == 0) || ranks.iter().zip(used.iter()).any(|(r, u)| r + u > opts.max_rank) {
            return;
        }
        let offsets = used.clone();
        for (u, r) in used.iter_mut().zip(&ranks) {
            *u += r;
        }
        blocks.push(Block { kind, lo, hi, ranks, offsets });
    };
    if opts.allow_empty {
        for _ in 0..rng.gen_range(0..=opts.max_rank) {
            push(BlockKind::Empty, 0, 0, &mut used);
        }
    }
    if support >= 1 {
        for _ in 0..rng.gen_range(1..=opts.max_blocks.max(1)) {
            let (kind, lo, hi) = candidate_kind(support, rng);
            if lo <= hi && hi <= support {
                push(kind, lo, hi, &mut used);
            }
        }
    }
    let base = SurjFunctorData::from_fn(ring, max_size, used.clone(), |s| {
        let (m, k) = (s.source(), s.target());
        let mut out = ExactMatrix::zeros(ring, used[k], used[m]);
        for b in &blocks {
            if b.active(m) && b.active(k) {
                out = out.with_block(b.offsets[k], b.offsets[m], &b.kind.base_action(ring, s));
            }
        }
        out
    });
    let changes: Vec<ExactMatrix> = if opts.conjugate {
        used.iter().map(|&r| random_unimodular(ring, r, rng)).collect()
    } else {
        used.iter().map(|&r| ExactMatrix::identity(ring, r)).collect()
    };
    let functor = base.conjugate(&changes).expect("unimodular changes");
    RandomSurj { functor, blocks, changes }
}

/// `Ind(F)` for a random `F` supported on sizes `≤ degree`.
pub fn random_polynomial_functor<R: Rng + ?Sized>(
    ring: RingSpec,
    max_size: usize,
    degree: usize,
    rng: &mut R,
) -> FunctorData {
    let opts = RandomOptions { support: degree, ..RandomOptions::default() };
    ind(&random_surj_functor(ring, max_size, &opts, rng).functor)
}

/// `Ind(F)` with `F` of rank `1..=3` at size 1 only (so `G({*}) = 0`),
/// seen through a random change of basis at every size.
pub fn random_linear_functor<R: Rng + ?Sized>(ring: RingSpec, max_size: usize, rng: &mut R) -> FunctorData {
    let r = rng.gen_range(1..=3);
    let mut ranks = vec![0; max_size + 1];
    if max_size >= 1 {
        ranks[1] = r;
    }
    let f = SurjFunctorData::from_fn(ring, max_size, ranks.clone(), |s| {
        if s.source() == 1 {
            ExactMatrix::identity(ring, r)
        } else {
            ExactMatrix::zeros(ring, ranks[s.target()], ranks[s.source()])
        }
    });
    let g = ind(&f);
    let changes = g.ranks().iter().map(|&n| random_unimodular(ring, n, rng)).collect();
    g.conjugate(changes).expect("unimodular changes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::is_invertible;
    use crate::functorcalc::{degree, validate};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_block_kind_is_functorial() {
        let ring = RingSpec::Integers;
        let kinds = [
            (BlockKind::Constant, 1, 4),
            (BlockKind::Linear, 1, 4),
            (BlockKind::Subsets(2), 2, 4),
            (BlockKind::SumZero, 2, 4),
            (BlockKind::Sign(3), 3, 3),
            (BlockKind::Standard(3), 3, 3),
            (BlockKind::Permutation(2), 2, 2),
        ];
        for (kind, lo, hi) in kinds {
            let ranks: Vec<usize> = (0..=4).map(|m| if lo <= m && m <= hi { kind.base_rank(m) } else { 0 }).collect();
            let f = SurjFunctorData::from_fn(ring, 4, ranks.clone(), |s| {
                if lo <= s.target() && s.source() <= hi {
                    kind.base_action(ring, s)
                } else {
                    ExactMatrix::zeros(ring, ranks[s.target()], ranks[s.source()])
                }
            });
            assert_eq!(f.validate(), None, "{kind:?}");
        }
    }

    #[test]
    fn random_functors_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ring in [RingSpec::Rationals, RingSpec::PrimeField(5), RingSpec::Integers] {
            for _ in 0..5 {
                let r = random_surj_functor(ring, 3, &RandomOptions::default(), &mut rng);
                assert_eq!(r.functor.validate(), None);
                assert!(r.functor.ranks().iter().all(|&k| k <= 3));
                assert!(r.changes.iter().all(is_invertible));
            }
        }
    }

    #[test]
    fn polynomial_degree_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in 0..=2 {
            let g = random_polynomial_functor(RingSpec::Rationals, 3, d, &mut rng);
            assert!(validate(&g).is_valid());
            assert!(degree(&g) <= d);
        }
    }

    #[test]
    fn linear_functor_has_no_basepoint_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_linear_functor(RingSpec::Integers, 3, &mut rng);
        assert_eq!(g.rank(0), 0);
        assert_eq!(degree(&g), 1);
        assert!(validate(&g).is_valid());
    }
}
