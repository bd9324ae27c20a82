// Acceptance criteria. One PASS/FAIL line per criterion; all comparisons are
// exact (tolerance 0). Checks marked `known` record a statement that the
// computation contradicts; they print FAIL but do not abort the run.

use std::process::ExitCode;
use std::time::Instant;

use excisive::diagramlimits::{
    check_vanishing, coordinate_trace, counterexample_family, cube_reconstruct, is_n_excisive, is_strongly_cartesian,
    limit_over_surjections, limit_over_surjections_with, restriction_map, skeleton_of, truncated_cube_limit,
    Constraints,
};
use excisive::exactlin::{determinant, solve_matrix, ExactMatrix, RingSpec};
use excisive::functorcalc::random::{
    random_linear_functor, random_polynomial_functor, random_surj_functor, RandomOptions,
};
use excisive::functorcalc::{
    all_surjections, check_condition, ind, ind_constant, ind_prim_isomorphism, prim, prim_ind_isomorphism, Condition,
    FunctorData,
};
use excisive::pointedsets::{enumerate_surjections, HypercubeSpec};
use excisive::polyfunctors::{build_p, charp_counterexample, monomial_orbit_decomposition, sym_poly_implication};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const RINGS: [RingSpec; 3] = [RingSpec::Rationals, RingSpec::PrimeField(5), RingSpec::Integers];

struct Check {
    name: String,
    ok: bool,
    known: bool,
}

#[derive(Default)]
struct Criterion {
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl Criterion {
    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push(Check { name: name.into(), ok, known: false });
    }

    fn known(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push(Check { name: name.into(), ok, known: true });
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn c1_ind_prim() -> Criterion {
    let mut c = Criterion::default();
    let mut bad_ranks = 0;
    let mut bad_prim_ind = 0;
    let mut bad_ind_prim = 0;
    for (r, &ring) in RINGS.iter().enumerate() {
        for k in 0..200u64 {
            let mut rng = rng(1_000 * r as u64 + k);
            let f = random_surj_functor(ring, 4, &RandomOptions::default(), &mut rng).functor;
            let g = ind(&f);
            let p = prim(&g);
            if p.ranks() != f.ranks() {
                bad_ranks += 1;
                continue;
            }
            // Prim(Ind F) -> F against every surjection.
            match prim_ind_isomorphism(&f) {
                Ok(comp) => {
                    let natural = all_surjections(4).iter().all(|s| {
                        let (a, b) = (s.source(), s.target());
                        f.action(s) * &comp[a] == &comp[b] * p.action(s)
                    });
                    if !natural {
                        bad_prim_ind += 1;
                    }
                }
                Err(_) => bad_prim_ind += 1,
            }
            // Ind(Prim G) -> G against every surjection.
            match ind_prim_isomorphism(&g) {
                Ok((_, t)) => {
                    let natural = all_surjections(4).iter().all(|s| {
                        let m = s.as_pointed();
                        &*t.target().action(&m) * t.component(s.source())
                            == t.component(s.target()) * &*t.source().action(&m)
                    });
                    if !natural || !t.is_isomorphism() {
                        bad_ind_prim += 1;
                    }
                }
                Err(_) => bad_ind_prim += 1,
            }
        }
    }
    c.check(format!("Prim Ind F ranks equal F ranks ({bad_ranks} of 600 differ)"), bad_ranks == 0);
    c.check(format!("Prim Ind F -> F natural and invertible ({bad_prim_ind} failures)"), bad_prim_ind == 0);
    c.check(format!("Ind Prim G -> G natural and invertible ({bad_ind_prim} failures)"), bad_ind_prim == 0);
    c
}

fn c2_conditions() -> Criterion {
    let mut c = Criterion::default();
    let mut disagreements = 0;
    let mut wrong_degree = 0;
    for k in 0..100u64 {
        let ring = RINGS[k as usize % 3];
        let f = random_surj_functor(ring, 4, &RandomOptions::default(), &mut rng(20_000 + k)).functor;
        // Oracle: Ind F has degree <= n iff F vanishes above n.
        let top = (0..=4).rev().find(|&m| f.rank(m) > 0).unwrap_or(0);
        let g = ind(&f);
        for n in 0..=3 {
            let v: Vec<bool> = Condition::ALL.iter().map(|&w| check_condition(&g, n, w)).collect();
            if v.iter().any(|&x| x != v[0]) {
                disagreements += 1;
            }
            if v[0] != (top <= n) {
                wrong_degree += 1;
            }
        }
    }
    c.check(format!("conditions i-iv agree on 400 pairs ({disagreements} disagreements)"), disagreements == 0);
    c.check(format!("common verdict matches the support of F ({wrong_degree} mismatches)"), wrong_degree == 0);
    c
}

fn c3_vanishing() -> Criterion {
    let mut c = Criterion::default();
    let mut failures = 0;
    let mut oracle_failures = 0;
    let mut not_unimodular = 0;
    let mut total = 0;
    for n in 0..=3 {
        for (r, ring) in [RingSpec::Rationals, RingSpec::PrimeField(7), RingSpec::Integers].into_iter().enumerate() {
            for k in 0..5u64 {
                let seed = 30_000 + 100 * n as u64 + 10 * r as u64 + k;
                let g = random_polynomial_functor(ring, 5, n, &mut rng(seed));
                total += 1;
                let lim = limit_over_surjections(&g, n + 2).expect("limit");
                let iso = lim.comparison_is_iso() && lim.rank() == g.rank(0);
                if !iso {
                    failures += 1;
                }
                if ring == RingSpec::Integers {
                    let cmp = &lim.comparison;
                    let unimodular = cmp.rows() == cmp.cols()
                        && (cmp.rows() == 0 || determinant(cmp).map(|d| d.abs().is_one()).unwrap_or(false));
                    if !unimodular {
                        not_unimodular += 1;
                    }
                }
                // Oracle: the full system of every surjection gives the same rank.
                if k == 0 {
                    let full = limit_over_surjections_with(&g, n + 2, Constraints::AllSurjections).expect("limit");
                    if full.rank() != g.rank(0) {
                        oracle_failures += 1;
                    }
                }
            }
        }
    }
    c.check(format!("comparison is an isomorphism on {total} functors ({failures} failures)"), failures == 0);
    c.check(format!("over Z the comparison is unimodular ({not_unimodular} failures)"), not_unimodular == 0);
    c.check(format!("all-surjection system agrees ({oracle_failures} failures)"), oracle_failures == 0);
    c
}

fn c4_counterexample() -> Criterion {
    let mut c = Criterion::default();
    let g = ind_constant(RingSpec::Integers, 5);
    for ell in 1..=5 {
        let fam = counterexample_family(&g, ell).expect("family");
        // Oracle: apply every surjection directly.
        let offsets: Vec<usize> = (0..=ell)
            .scan(0, |acc, m| {
                let o = *acc;
                if m >= 1 {
                    *acc += g.rank(m);
                }
                Some(o)
            })
            .collect();
        let part = |m: usize| fam.family.row_block(offsets[m], g.rank(m));
        let mut compatible = true;
        for a in 1..=ell {
            for b in 1..=a {
                for s in enumerate_surjections(a, b) {
                    if &*g.action(&s.as_pointed()) * &part(a) != part(b) {
                        compatible = false;
                    }
                }
            }
        }
        let to_base = &*g.action(&excisive::pointedsets::PointedMap::new(0, vec![0]).unwrap()) * &part(1);
        c.check(format!("l = {ell}: family compatible with every surjection"), compatible && fam.compatible);
        c.check(format!("l = {ell}: comparison sends it to 0"), to_base.is_zero() && fam.comparison_zero);
        let big = limit_over_surjections(&g, ell).expect("limit");
        let coords = solve_matrix(&big.basis, &fam.family).expect("solve").expect("family lies in the limit");
        for small in 1..=ell {
            let r = restriction_map(&g, ell, small).expect("restriction");
            c.check(format!("l = {ell}, l' = {small}: restriction is nonzero"), !(&r * &coords).is_zero());
        }
    }
    c
}

fn c5_linear() -> Criterion {
    let mut c = Criterion::default();
    let mut bad = 0;
    for k in 0..50u64 {
        let n = 3 + (k as usize % 3);
        let ring = RINGS[(k as usize / 3) % 3];
        let g = random_linear_functor(ring, n, &mut rng(50_000 + k));
        let lim = limit_over_surjections(&g, n).expect("limit");
        let zero_maps = (1..=n).all(|small| {
            let r = restriction_map(&g, n, small).expect("restriction");
            r.cols() == 0 || r.is_zero()
        });
        if g.rank(0) != 0 || lim.rank() != 0 || !zero_maps {
            bad += 1;
        }
    }
    c.check(format!("50 linear functors: limit rank 0 and zero restrictions ({bad} failures)"), bad == 0);
    c
}

fn c6_monomials() -> Criterion {
    let mut c = Criterion::default();
    for (n, d) in [(1, 1), (1, 2), (2, 2), (1, 3)] {
        let spec = HypercubeSpec::new(vec![1; d + 1]).unwrap();
        let dec = monomial_orbit_decomposition(n, d, &spec).expect("decomposition");
        let g = build_p(RingSpec::Rationals, n, d, d + 2);
        // Oracle: the top square has surjective zeroing maps, so it is cartesian
        // iff dim G(t) = 2 dim G(t-1) - dim G(t-2) with dim G(k) = C(nk+d-1, d).
        let dim = |k: usize| binomial(n * k + d - 1, d);
        let top = d + 1;
        let square_cartesian = dim(top) + dim(top - 2) == 2 * dim(top - 1);
        let strong = dec.certified();
        c.known(format!("P({n},{d}): orbit decomposition certifies strongly cartesian"), strong);
        c.check(
            format!("P({n},{d}): strong verdict matches the dimension oracle and the direct check"),
            strong == square_cartesian && strong == is_strongly_cartesian(&g, &spec).expect("check"),
        );
        c.check(format!("P({n},{d}): orbit decomposition certifies weakly cartesian"), dec.certified_weak());
        c.check(format!("P({n},{d}) is {d}-excisive"), is_n_excisive(&g, d));
        c.check(format!("P({n},{d}) is not {}-excisive", d - 1), !is_n_excisive(&g, d - 1));
        if let Some((piece, vertex, b, cc)) = dec.square_witness {
            c.note(format!(
                "P({n},{d}): square at vertex {vertex:#b} on blocks {b},{cc} is not cartesian on the piece of {}",
                dec.pieces[piece].monomial
            ));
        }
    }
    c
}

fn c7_paring() -> Criterion {
    let mut c = Criterion::default();
    let g = build_p(RingSpec::Rationals, 1, 2, 4);
    let cmp = truncated_cube_limit(&g, &HypercubeSpec::new(vec![1, 1, 1, 1]).unwrap(), 2).expect("limit");
    // Oracle: enumerate exponent vectors of degree 2 in 4 variables.
    let mut count = 0;
    for a in 0..=2 {
        for b in 0..=2 - a {
            for cc in 0..=2 - a - b {
                let _ = 2 - a - b - cc;
                count += 1;
            }
        }
    }
    c.check(
        format!("P(1,2) on (1,1,1,1), h = 2: iso with rank {} (enumeration {count})", cmp.limit_rank),
        cmp.iso && cmp.limit_rank == 10 && count == 10,
    );
    let specs = [vec![1, 1, 1], vec![2, 1, 1], vec![1, 1, 1, 1]];
    let mut bad = 0;
    for k in 0..30u64 {
        let g = random_polynomial_functor(RingSpec::Rationals, 4, 2, &mut rng(70_000 + k));
        let spec = HypercubeSpec::new(specs[k as usize % 3].clone()).unwrap();
        let r = truncated_cube_limit(&g, &spec, 2).expect("limit");
        if !r.iso || r.limit_rank != g.rank(spec.total()) {
            bad += 1;
        }
    }
    c.check(format!("30 random quadratic functors, dimensions 3 and 4 ({bad} failures)"), bad == 0);
    c
}

fn c8_reconstruct() -> Criterion {
    let mut c = Criterion::default();
    for n in [3, 4] {
        let mut bad = 0;
        for k in 0..30u64 {
            let g = random_polynomial_functor(RingSpec::Rationals, n, 2, &mut rng(80_000 + 100 * n as u64 + k));
            let r = cube_reconstruct(&skeleton_of(&g, n).expect("skeleton")).expect("reconstruct");
            let cert = r.certify(&g).expect("certify");
            if r.rank != g.rank(n) || !cert.iso {
                bad += 1;
            }
        }
        c.check(format!("n = {n}: 30 quadratic functors reconstructed and certified ({bad} failures)"), bad == 0);
    }
    let g = build_p(RingSpec::Rationals, 1, 3, 4);
    let r = cube_reconstruct(&skeleton_of(&g, 4).expect("skeleton")).expect("reconstruct");
    let cert = r.certify(&g).expect("certify");
    c.check(
        format!("degree-3 control fails (rank {} vs {}, injective {})", r.rank, g.rank(4), cert.injective),
        !cert.iso,
    );
    c
}

/// Symmetric forms in the monomial symmetric basis: columns are partitions
/// of `d` into at most three parts, rows are the coefficients of
/// `f(x,x,y) - f(x,y,y)` on `x^i y^(d-i)`. Returns the dimension of the
/// constraint space and whether `f(x,x,x)` vanishes on it.
fn sym_oracle(ring: RingSpec, d: usize) -> (usize, bool) {
    let mut parts = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=a.min(d - a)).rev() {
            let cc = d - a - b;
            if cc <= b {
                parts.push([a, b, cc]);
            }
        }
    }
    let perms = |p: [usize; 3]| {
        let mut out: Vec<[usize; 3]> = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
            .iter()
            .map(|s| [p[s[0]], p[s[1]], p[s[2]]])
            .collect();
        out.sort();
        out.dedup();
        out
    };
    let mut rows = vec![0i64; (d + 1) * parts.len()];
    let mut value = vec![0i64; parts.len()];
    for (j, &p) in parts.iter().enumerate() {
        for e in perms(p) {
            rows[(e[0] + e[1]) * parts.len() + j] += 1;
            rows[e[0] * parts.len() + j] -= 1;
            value[j] += 1;
        }
    }
    let m = ExactMatrix::from_i64(ring, d + 1, parts.len(), &rows);
    let k = excisive::exactlin::kernel_basis(&m);
    let h = &ExactMatrix::from_i64(ring, 1, parts.len(), &value) * &k;
    (k.cols(), h.is_zero())
}

fn c9_sympoly() -> Criterion {
    let mut c = Criterion::default();
    let mut all_zero = true;
    let mut oracle_agrees = true;
    for d in 1..=8 {
        let s = sym_poly_implication(RingSpec::Rationals, d).expect("sympoly");
        let (dim, zero) = sym_oracle(RingSpec::Rationals, d);
        all_zero &= s.map_is_zero;
        oracle_agrees &= dim == s.space_dim && zero == s.map_is_zero;
    }
    c.check("over Q the map is zero for 1 <= d <= 8", all_zero);
    c.check("symmetric-basis oracle agrees on dimension and verdict", oracle_agrees);
    for p in [5u64, 7, 11] {
        let ce = charp_counterexample(p).expect("charp");
        let ring = RingSpec::PrimeField(p as u32);
        // Oracle: h(1) is the coefficient sum of f, computed from the terms.
        let sum = ce.f.terms().fold(BigRational::zero(), |acc, (_, v)| acc + v.clone());
        let sum = ring.reduce(&sum).expect("reduce");
        let printed = ring.reduce(&BigRational::from_integer(BigInt::from(p - 1))).unwrap();
        let derived = ring.reduce(&BigRational::from_integer(BigInt::from(p - 3))).unwrap();
        c.check(format!("p = {p}: f symmetric and f(x,x,y) = f(x,y,y)"), ce.symmetric && ce.in_constraint_space);
        c.check(format!("p = {p}: f(x,x,y) = x^(p-2)y^2 + ... + x^2y^(p-2)"), ce.g_as_printed);
        c.known(format!("p = {p}: f(x,x,x) = (p-1)x^p, computed {}", ce.h), ce.h_as_printed && sum == printed);
        c.check(
            format!("p = {p}: f(x,x,x) = (p-3)x^p by coefficient sum"),
            sum == derived && ce.h_coefficient == derived,
        );
    }
    let s = sym_poly_implication(RingSpec::PrimeField(5), 5).expect("sympoly");
    let (_, zero) = sym_oracle(RingSpec::PrimeField(5), 5);
    c.check("over F_5 at d = 5 a nonzero witness exists", !s.map_is_zero && s.witness.is_some() && !zero);
    c
}

fn c10_trace() -> Criterion {
    let mut c = Criterion::default();
    let mut bad = Vec::new();
    let mut equations = 0;
    let mut blocks = 0;
    for k in 0..20u64 {
        let g: FunctorData = random_polynomial_functor(RingSpec::Rationals, 4, 2, &mut rng(100_000 + k));
        let t = coordinate_trace(&g, 2, 4).expect("trace");
        let v = check_vanishing(&g, 2, 4).expect("vanishing");
        equations += t.equations_checked;
        blocks += t.block_checks;
        let ok = t.symmetric
            && t.decompose_agrees
            && t.preimage_counts_ok
            && t.block_formula_ok
            && t.equations_ok
            && t.vanishing
            && v.iso;
        if !ok {
            bad.push(k);
        }
    }
    c.check(
        format!("20 functors: block formula ({blocks} checks), equations ({equations} checks) and vanishing; failing {bad:?}"),
        bad.is_empty(),
    );
    c
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Criterion); 10] = [
        ("1 Ind/Prim round trip", c1_ind_prim),
        ("2 degree conditions agree", c2_conditions),
        ("3 limit over surjections is G(*)", c3_vanishing),
        ("4 non-injective comparison without degree bound", c4_counterexample),
        ("5 linear functors have zero limit", c5_linear),
        ("6 monomial functors on special cubes", c6_monomials),
        ("7 truncated cube limits", c7_paring),
        ("8 reconstruction from the height <= 2 skeleton", c8_reconstruct),
        ("9 symmetric polynomial implication", c9_sympoly),
        ("10 coordinate trace of the vanishing argument", c10_trace),
    ];
    println!("acceptance: exact arithmetic, tolerance 0");
    let mut hard_failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let c = run();
        let pass = c.checks.iter().all(|k| k.ok);
        println!("{} criterion {name} ({:.1}s)", if pass { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64());
        for k in &c.checks {
            if !k.ok {
                println!("    failed{}: {}", if k.known { " (recorded conflict)" } else { "" }, k.name);
                if !k.known {
                    hard_failures += 1;
                }
            }
        }
        for n in &c.notes {
            println!("    note: {n}");
        }
    }
    if hard_failures > 0 {
        println!("{hard_failures} unexpected failures");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
