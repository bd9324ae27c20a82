use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use excisive::cli::FunctorSpecFile;
use excisive::diagramlimits::{is_n_excisive, limit_over_surjections, truncated_cube_limit};
use excisive::exactlin::{
    determinant, inverse, kernel_basis, rank, smith_normal_form, solve, split_idempotent, ExactMatrix, RingSpec,
};
use excisive::functorcalc::random::{random_surj_functor, random_unimodular, RandomOptions};
use excisive::functorcalc::{
    check_condition, degree, ind, ind_nat, ind_prim_isomorphism, nat_cokernel, nat_kernel, prim, prim_rank, validate,
    Condition,
};
use excisive::pointedsets::{
    enumerate_pointed_maps, mask_elements, phi_map, psi_map, smash, special_hypercube, subsets_in_order, wedge,
    HypercubeSpec, PointedMap,
};
use excisive::polyfunctors::build_p;
use num_traits::Signed;

fn ring_strategy() -> impl Strategy<Value = RingSpec> {
    prop_oneof![Just(RingSpec::Rationals), Just(RingSpec::PrimeField(5)), Just(RingSpec::Integers)]
}

fn field_strategy() -> impl Strategy<Value = RingSpec> {
    prop_oneof![Just(RingSpec::Rationals), Just(RingSpec::PrimeField(3)), Just(RingSpec::PrimeField(7))]
}

fn matrix(ring: RingSpec, rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(-4i64..=4, rows * cols).prop_map(move |v| ExactMatrix::from_i64(ring, rows, cols, &v))
}

fn ring_and_matrix() -> impl Strategy<Value = ExactMatrix> {
    (ring_strategy(), 1usize..5, 1usize..5).prop_flat_map(|(r, a, b)| matrix(r, a, b))
}

fn pointed_map(source: usize, target: usize) -> impl Strategy<Value = PointedMap> {
    prop::collection::vec(0..=target, source).prop_map(move |v| PointedMap::new(target, v).unwrap())
}

fn renumber(inner: u32, outer: u32) -> Vec<usize> {
    let outer = mask_elements(outer);
    mask_elements(inner).iter().map(|e| outer.iter().position(|o| o == e).unwrap() + 1).collect()
}

/// Position of `(i, j)` of `[a] × ([b] ⊔ [c])` inside `([a] × [b]) ⊔ ([a] × [c])`.
fn distribute(a: usize, b: usize, c: usize) -> PointedMap {
    let mut images = Vec::with_capacity(a * (b + c));
    for i in 1..=a {
        for j in 1..=b + c {
            images.push(if j <= b { (i - 1) * b + j } else { a * b + (i - 1) * c + (j - b) });
        }
    }
    PointedMap::new(a * (b + c), images).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kernel_is_annihilated_and_has_complementary_rank(m in ring_and_matrix()) {
        let k = kernel_basis(&m);
        prop_assert!((&m * &k).is_zero());
        prop_assert_eq!(rank(&k) + rank(&m), m.cols());
    }

    #[test]
    fn smith_form_reassembles(m in (1usize..5, 1usize..5).prop_flat_map(|(a, b)| matrix(RingSpec::Integers, a, b))) {
        let s = smith_normal_form(&m).unwrap();
        prop_assert_eq!(&(&s.u * &s.d) * &s.v, m);
        prop_assert!(determinant(&s.u).unwrap().abs() == num_rational::BigRational::from_integer(1.into()));
        prop_assert!(determinant(&s.v).unwrap().abs() == num_rational::BigRational::from_integer(1.into()));
        for w in s.invariants.windows(2) {
            prop_assert!((&w[1] % &w[0]) == 0.into());
        }
    }

    #[test]
    fn solve_is_exact_or_certifiably_impossible(
        (m, b) in (field_strategy(), 1usize..5, 1usize..5)
            .prop_flat_map(|(r, a, c)| (matrix(r, a, c), matrix(r, a, 1)))
    ) {
        match solve(&m, &b).unwrap() {
            Some(x) => prop_assert_eq!(&m * &x, b),
            None => {
                let aug = ExactMatrix::hstack(m.ring(), m.rows(), &[&m, &b]);
                prop_assert!(rank(&aug) > rank(&m));
            }
        }
    }

    #[test]
    fn split_idempotent_round_trips(ring in ring_strategy(), n in 1usize..5, seed in any::<u64>(), mask in any::<u8>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_unimodular(ring, n, &mut rng);
        let d = ExactMatrix::from_fn(ring, n, n, |i, j| i64::from(i == j && mask >> i & 1 == 1));
        let e = &(&s * &d) * &inverse(&s).unwrap();
        let (p, q) = split_idempotent(&e).unwrap();
        prop_assert_eq!(&p * &q, e);
        prop_assert!((&q * &p).is_identity());
    }

    #[test]
    fn phi_psi_identities(m in 1usize..=5, a in any::<u32>(), b in any::<u32>()) {
        let full = (1u32 << m) - 1;
        let outer = (a | b) & full;
        let inner = a & b & full;
        let s = mask_elements(inner);
        let sp = mask_elements(outer);
        let inner_in_outer = renumber(inner, outer);
        let phi = phi_map(m, &s).unwrap();
        let psi = psi_map(m, &s).unwrap();
        prop_assert!(psi.compose(&phi).unwrap().is_identity());
        let psi_nested = psi_map(sp.len(), &inner_in_outer).unwrap().compose(&psi_map(m, &sp).unwrap()).unwrap();
        prop_assert_eq!(psi_nested, psi);
        let phi_nested = phi_map(m, &sp).unwrap().compose(&phi_map(sp.len(), &inner_in_outer).unwrap()).unwrap();
        prop_assert_eq!(phi_nested, phi);
    }

    #[test]
    fn composition_is_associative_and_unital(
        (f, g, h) in (0usize..4, 0usize..4, 0usize..4, 0usize..4)
            .prop_flat_map(|(a, b, c, d)| (pointed_map(a, b), pointed_map(b, c), pointed_map(c, d)))
    ) {
        let left = h.compose(&g).unwrap().compose(&f).unwrap();
        let right = h.compose(&g.compose(&f).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(PointedMap::identity(f.target()).compose(&f).unwrap(), f.clone());
        prop_assert_eq!(f.compose(&PointedMap::identity(f.source())).unwrap(), f);
    }

    #[test]
    fn smash_distributes_over_wedge(
        (f, g, h) in (0usize..3, 0usize..3, 0usize..3, 0usize..3, 0usize..3, 0usize..3)
            .prop_flat_map(|(a, a2, b, b2, c, c2)| (pointed_map(a, a2), pointed_map(b, b2), pointed_map(c, c2)))
    ) {
        let lhs = smash(&f, &wedge(&g, &h));
        let rhs = wedge(&smash(&f, &g), &smash(&f, &h));
        prop_assert_eq!(lhs.source(), rhs.source());
        prop_assert_eq!(lhs.target(), rhs.target());
        let sigma = distribute(f.source(), g.source(), h.source());
        let tau = distribute(f.target(), g.target(), h.target());
        prop_assert_eq!(tau.compose(&lhs).unwrap(), rhs.compose(&sigma).unwrap());
    }

    #[test]
    fn special_cubes_are_strongly_cocartesian(blocks in prop::collection::vec(1usize..=2, 1..=3)) {
        let cube = special_hypercube(&HypercubeSpec::new(blocks).unwrap());
        prop_assert!(cube.is_strongly_cocartesian(3));
    }
}

fn random_ind(ring: RingSpec, n: usize, seed: u64, opts: &RandomOptions) -> excisive::functorcalc::random::RandomSurj {
    random_surj_functor(ring, n, opts, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prim_of_ind_recovers_ranks(ring in ring_strategy(), seed in any::<u64>()) {
        let f = random_ind(ring, 4, seed, &RandomOptions::default()).functor;
        let g = ind(&f);
        prop_assert!(validate(&g).is_valid());
        let p = prim(&g);
        prop_assert_eq!(p.ranks(), f.ranks());
        let (_, t) = ind_prim_isomorphism(&g).unwrap();
        prop_assert!(t.is_isomorphism());
    }

    #[test]
    fn prim_ranks_sum_over_subsets(ring in ring_strategy(), seed in any::<u64>()) {
        let g = ind(&random_ind(ring, 4, seed, &RandomOptions::default()).functor);
        for m in 0..=4 {
            let total: usize = subsets_in_order(m).iter().map(|s| prim_rank(&g, s.count_ones() as usize)).sum();
            prop_assert_eq!(total, g.rank(m));
        }
    }

    #[test]
    fn conditions_match_degree(ring in ring_strategy(), seed in any::<u64>(), n in 0usize..=3) {
        let g = ind(&random_ind(ring, 4, seed, &RandomOptions::default()).functor);
        let d = degree(&g);
        for c in Condition::ALL {
            prop_assert_eq!(check_condition(&g, n, c), d <= n);
        }
    }

    #[test]
    fn kernels_and_cokernels_do_not_raise_degree(
        ring in field_strategy(),
        seed in any::<u64>(),
        scalars in prop::collection::vec(-2i64..=2, 16),
    ) {
        let r = random_ind(ring, 3, seed, &RandomOptions::default());
        let comps = r.block_scalar_endomorphism(&scalars);
        let t = ind_nat(&r.functor, &r.functor, &comps).unwrap();
        let d = degree(t.source());
        prop_assert!(degree(&nat_kernel(&t)) <= d);
        prop_assert!(degree(&nat_cokernel(&t).unwrap()) <= d);
    }

    #[test]
    fn comparison_is_iso_above_the_degree(ring in ring_strategy(), seed in any::<u64>(), n in 0usize..=2) {
        let opts = RandomOptions { support: n, ..RandomOptions::default() };
        let g = ind(&random_ind(ring, 4, seed, &opts).functor);
        let d = degree(&g);
        for ell in d + 2..=4 {
            prop_assert!(limit_over_surjections(&g, ell).unwrap().comparison_is_iso());
        }
    }

    #[test]
    fn excision_matches_degree(ring in field_strategy(), seed in any::<u64>(), n in 0usize..=2) {
        let g = ind(&random_ind(ring, 4, seed, &RandomOptions { max_rank: 2, ..RandomOptions::default() }).functor);
        prop_assert_eq!(is_n_excisive(&g, n), degree(&g) <= n);
    }

    #[test]
    fn truncated_limits_stabilize_from_the_degree(seed in any::<u64>(), support in 0usize..=2) {
        let opts = RandomOptions { support, max_rank: 2, ..RandomOptions::default() };
        let g = ind(&random_ind(RingSpec::Rationals, 4, seed, &opts).functor);
        let spec = HypercubeSpec::new(vec![1, 1, 1, 1]).unwrap();
        let d = degree(&g);
        for h in d..=4 {
            prop_assert!(truncated_cube_limit(&g, &spec, h).unwrap().iso);
        }
    }

    #[test]
    fn ind_spec_files_round_trip(ring in ring_strategy(), seed in any::<u64>()) {
        let f = random_ind(ring, 3, seed, &RandomOptions::default()).functor;
        let spec = FunctorSpecFile::from_surj(&f);
        let text = spec.to_canonical_string();
        let back = FunctorSpecFile::parse(&text).unwrap();
        prop_assert_eq!(back.to_canonical_string(), text);
        let (built, expected) = (back.build().unwrap(), ind(&f));
        prop_assert_eq!(built.ranks(), expected.ranks());
    }

    #[test]
    fn explicit_spec_files_round_trip(ring in ring_strategy(), seed in any::<u64>()) {
        let g = ind(&random_ind(ring, 2, seed, &RandomOptions::default()).functor);
        let spec = FunctorSpecFile::from_functor(&g);
        let text = spec.to_canonical_string();
        let back = FunctorSpecFile::parse(&text).unwrap();
        prop_assert_eq!(back.to_canonical_string(), text);
        let h = back.build().unwrap();
        prop_assert!(validate(&h).is_valid());
        for f in enumerate_pointed_maps(2, 2, usize::MAX).unwrap() {
            prop_assert_eq!(&*h.action(&f), &*g.action(&f));
        }
    }
}

#[test]
fn monomial_functors_have_their_degree() {
    for ring in [RingSpec::Rationals, RingSpec::PrimeField(3), RingSpec::Integers] {
        for n in 1..=2 {
            for d in 0..=3 {
                let g = build_p(ring, n, d, 4);
                assert!(validate(&g).is_valid());
                assert_eq!(degree(&g), d.min(4));
            }
        }
    }
}
