use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::diagramlimits::{
    check_vanishing, counterexample_family, cube_reconstruct, derived_limits, is_n_excisive, limit_over_surjections,
    skeleton_of, truncated_cube_limit,
};
use crate::exactlin::RingSpec;
use crate::functorcalc::random::{random_surj_functor, RandomOptions};
use crate::functorcalc::{degree, ind, ind_constant, ind_prim_isomorphism, prim_rank, validate, FunctorData};
use crate::pointedsets::HypercubeSpec;
use crate::polyfunctors::{charp_counterexample, sym_poly_implication};

use super::format::matrix_json;
use super::{CliError, FunctorSpecFile, Report};

/// Reads and parses a spec file.
pub fn load_spec(path: &Path) -> Result<FunctorSpecFile, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(FunctorSpecFile::parse(&text)?)
}

fn load(path: &Path) -> Result<(FunctorSpecFile, FunctorData), CliError> {
    let spec = load_spec(path)?;
    let g = spec.build()?;
    Ok((spec, g))
}

fn describe(spec: &FunctorSpecFile, g: &FunctorData) -> String {
    format!("{} functor over {}, N = {}, ranks {:?}", kind_name(spec), spec.ring, spec.max_size, g.ranks())
}

fn kind_name(spec: &FunctorSpecFile) -> &'static str {
    use super::FunctorKind::*;
    match spec.kind {
        Constant { .. } => "constant",
        IndConstant => "ind_constant",
        P { .. } => "P",
        PLe { .. } => "P_le",
        Ind { .. } => "ind",
        Explicit { .. } => "explicit",
    }
}

fn report(
    command: &str,
    claim: &str,
    holds: bool,
    verdict: impl Into<String>,
    lines: Vec<String>,
    result: Value,
) -> Report {
    Report { command: command.into(), claim: claim.into(), holds, verdict: verdict.into(), lines, result }
}

pub fn cmd_validate(path: &Path) -> Result<Report, CliError> {
    let (spec, g) = load(path)?;
    let v = validate(&g);
    let verdict = match &v.violation {
        None => "functor laws hold".to_string(),
        Some(x) => format!("first violation: {x}"),
    };
    Ok(report(
        "validate",
        "the action tables define a functor on pointed finite sets",
        v.is_valid(),
        verdict,
        vec![describe(&spec, &g), v.to_string()],
        json!({
            "ranks": g.ranks(),
            "squares_checked": v.checked,
            "exhaustive": v.exhaustive,
            "violation": v.violation.as_ref().map(|x| x.to_string()),
        }),
    ))
}

fn prim_ranks(g: &FunctorData) -> Vec<usize> {
    (0..=g.max_size()).map(|m| prim_rank(g, m)).collect()
}

pub fn cmd_degree(path: &Path) -> Result<Report, CliError> {
    let (spec, g) = load(path)?;
    let d = degree(&g);
    let pr = prim_ranks(&g);
    Ok(report(
        "degree",
        "the degree is the largest size where Prim is nonzero",
        true,
        format!("degree {d}"),
        vec![describe(&spec, &g), format!("Prim ranks {pr:?}")],
        json!({ "degree": d, "prim_ranks": pr }),
    ))
}

pub fn cmd_prim(path: &Path) -> Result<Report, CliError> {
    let (spec, g) = load(path)?;
    let (parts, t) = ind_prim_isomorphism(&g)?;
    let iso = t.is_isomorphism();
    let pr = parts.functor.ranks().to_vec();
    let back = ind(&parts.functor);
    Ok(report(
        "prim",
        "G is isomorphic to Ind(Prim G)",
        iso,
        if iso { "Ind(Prim G) -> G is an isomorphism" } else { "Ind(Prim G) -> G is not an isomorphism" },
        vec![describe(&spec, &g), format!("Prim ranks {pr:?}"), format!("Ind(Prim G) ranks {:?}", back.ranks())],
        json!({ "prim_ranks": pr, "ind_ranks": back.ranks(), "iso": iso }),
    ))
}

pub fn cmd_limit(path: &Path, ell: usize) -> Result<Report, CliError> {
    let (spec, g) = load(path)?;
    let lim = limit_over_surjections(&g, ell)?;
    let d = degree(&g);
    let iso = lim.comparison_is_iso();
    let injective = lim.comparison_is_injective();
    let base = g.rank(0);
    Ok(report(
        "limit",
        "for G of degree <= n and l >= n + 2 the limit over nonempty sets of size <= l with surjections is G(*)",
        iso,
        if iso {
            "comparison is an isomorphism"
        } else if injective {
            "comparison not surjective"
        } else {
            "comparison not injective"
        },
        vec![
            describe(&spec, &g),
            format!("degree {d}, l = {ell}, hypothesis {}", if d + 2 <= ell { "met" } else { "not met" }),
            format!("limit rank {}, G(*) rank {base}", lim.rank()),
        ],
        json!({
            "ell": ell,
            "degree": d,
            "hypothesis_met": d + 2 <= ell,
            "limit_rank": lim.rank(),
            "base_rank": base,
            "iso": iso,
            "injective": injective,
            "comparison": matrix_json(&lim.comparison),
        }),
    ))
}

pub fn cmd_derived(path: &Path, ell: usize) -> Result<Report, CliError> {
    let (spec, g) = load(path)?;
    let dl = derived_limits(&g, ell)?;
    let lim = limit_over_surjections(&g, ell)?;
    let agrees = dl.h0 == lim.rank();
    Ok(report(
        "derived",
        "H^0 of the nerve cochains computes the limit",
        agrees,
        format!("H^0 rank {}, H^1 rank {}", dl.h0, dl.h1),
        vec![describe(&spec, &g), format!("cochain ranks {:?}", dl.cochain_ranks)],
        json!({ "ell": ell, "cochain_ranks": dl.cochain_ranks, "h0": dl.h0, "h1": dl.h1, "limit_rank": lim.rank() }),
    ))
}

pub fn cmd_excisive(path: &Path, n: usize) -> Result<Report, CliError> {
    let (spec, g) = load(path)?;
    let ex = is_n_excisive(&g, n);
    let d = degree(&g);
    Ok(report(
        "excisive",
        "G sends special cubes with more than n blocks to weakly cartesian cubes",
        ex,
        if ex { format!("{n}-excisive") } else { format!("not {n}-excisive") },
        vec![describe(&spec, &g), format!("degree {d}")],
        json!({ "n": n, "excisive": ex, "degree": d, "agrees_with_degree": ex == (d <= n) }),
    ))
}

/// Parses a block list like `1,1,2`.
pub(crate) fn parse_blocks(text: &str) -> Result<HypercubeSpec, CliError> {
    let blocks = text
        .split(',')
        .map(|b| b.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad block size {b:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(HypercubeSpec::new(blocks)?)
}

pub fn cmd_paring(path: &Path, blocks: &str, height: usize) -> Result<Report, CliError> {
    let (spec, g) = load(path)?;
    let cube = parse_blocks(blocks)?;
    let c = truncated_cube_limit(&g, &cube, height)?;
    Ok(report(
        "paring",
        "an n-excisive G at the top of a special cube is the limit of the vertices of height <= n",
        c.iso,
        if c.iso { "comparison is an isomorphism" } else { "comparison is not an isomorphism" },
        vec![
            describe(&spec, &g),
            format!("blocks {:?}, height {height}", cube.blocks()),
            format!("truncated limit rank {}, top rank {}", c.limit_rank, c.source_rank),
        ],
        json!({
            "blocks": cube.blocks(),
            "height": height,
            "limit_rank": c.limit_rank,
            "source_rank": c.source_rank,
            "iso": c.iso,
            "injective": c.injective,
            "surjective": c.surjective,
        }),
    ))
}

pub fn cmd_reconstruct(path: &Path, n: usize) -> Result<Report, CliError> {
    let (spec, g) = load(path)?;
    let sk = skeleton_of(&g, n)?;
    let r = cube_reconstruct(&sk)?;
    let c = r.certify(&g)?;
    Ok(report(
        "reconstruct",
        "a quadratic functor on n singletons is recovered from the vertices of height <= 2",
        c.iso,
        if c.iso { "reconstruction certified" } else { "reconstruction fails" },
        vec![
            describe(&spec, &g),
            format!("reconstructed rank {}, G(size {n}) rank {}", r.rank, g.rank(n)),
            format!("injective {}, surjective {}", c.injective, c.surjective),
        ],
        json!({
            "n": n,
            "rank": r.rank,
            "target_rank": g.rank(n),
            "iso": c.iso,
            "injective": c.injective,
            "surjective": c.surjective,
        }),
    ))
}

pub fn cmd_counterexample(ell: usize) -> Result<Report, CliError> {
    if ell == 0 {
        return Err(CliError::Usage("--ell must be at least 1".into()));
    }
    let g = ind_constant(RingSpec::Integers, ell);
    let c = counterexample_family(&g, ell)?;
    let lim = limit_over_surjections(&g, ell)?;
    let restrictions: Vec<bool> = (1..=ell)
        .map(|small| {
            let rows: usize = (1..=small).map(|m| g.rank(m)).sum();
            !c.family.row_block(0, rows).is_zero()
        })
        .collect();
    let holds = c.compatible && c.comparison_zero && c.nonzero;
    Ok(report(
        "counterexample",
        "without a degree bound the comparison map can fail to be injective",
        holds,
        if holds { "comparison not injective" } else { "family is not a witness" },
        vec![
            format!("Ind of the constant functor over Z, l = {ell}"),
            format!("{} surjections checked, compatible {}", c.surjections_checked, c.compatible),
            format!("comparison image zero {}, family nonzero {}", c.comparison_zero, c.nonzero),
            format!("limit rank {}, G(*) rank {}", lim.rank(), g.rank(0)),
        ],
        json!({
            "ell": ell,
            "compatible": c.compatible,
            "comparison_zero": c.comparison_zero,
            "nonzero": c.nonzero,
            "surjections_checked": c.surjections_checked,
            "restrictions_nonzero": restrictions,
            "limit_rank": lim.rank(),
            "family": matrix_json(&c.family),
        }),
    ))
}

pub fn cmd_sympoly(ring: RingSpec, d: usize) -> Result<Report, CliError> {
    let s = sym_poly_implication(ring, d)?;
    let mut lines = vec![format!(
        "degree {d} over {ring}: {} monomials, constraint space of dimension {}",
        s.monomials, s.space_dim
    )];
    if let (Some(w), Some(v)) = (&s.witness, &s.witness_value) {
        lines.push(format!("witness f = {w}"));
        lines.push(format!("f(x,x,x) = {v}"));
    }
    Ok(report(
        "sympoly",
        "a symmetric form f(x,y,z) with f(x,x,y) = f(x,y,y) has f(x,x,x) = 0",
        s.map_is_zero,
        if s.map_is_zero { "zero map" } else { "nonzero witness" },
        lines,
        json!({
            "ring": ring.to_string(),
            "degree": d,
            "monomials": s.monomials,
            "space_dim": s.space_dim,
            "zero_map": s.map_is_zero,
            "witness": s.witness.as_ref().map(|w| w.to_string()),
            "witness_value": s.witness_value.as_ref().map(|w| w.to_string()),
        }),
    ))
}

pub fn cmd_charp(p: u64) -> Result<Report, CliError> {
    let c = charp_counterexample(p)?;
    let holds = c.symmetric && c.in_constraint_space && c.h_nonzero;
    Ok(report(
        "charp",
        "in characteristic p >= 5 the degree-p implication fails",
        holds,
        if holds { "f(x,x,x) is nonzero" } else { "no counterexample" },
        vec![format!("f(x,y,z) = {}", c.f), format!("f(x,x,y) = {}", c.g), format!("f(x,x,x) = {}", c.h)],
        json!({
            "p": p,
            "f": c.f.to_string(),
            "f_xxy": c.g.to_string(),
            "f_xxx": c.h.to_string(),
            "f_xxx_coefficient": RingSpec::Rationals.format_scalar(&c.h_coefficient),
            "symmetric": c.symmetric,
            "in_constraint_space": c.in_constraint_space,
            "f_xxy_matches_printed": c.g_as_printed,
            "f_xxx_matches_printed": c.h_as_printed,
        }),
    ))
}

fn random_spec(ring: RingSpec, max_size: usize, degree: usize, seed: u64) -> FunctorSpecFile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = RandomOptions { support: degree, ..RandomOptions::default() };
    FunctorSpecFile::from_surj(&random_surj_functor(ring, max_size, &opts, &mut rng).functor)
}

/// A random `Ind(F)` with `F` supported on sizes `<= degree`, as a spec file.
pub fn cmd_random(
    ring: RingSpec,
    max_size: usize,
    max_degree: usize,
    seed: u64,
) -> Result<(Report, FunctorSpecFile), CliError> {
    let spec = random_spec(ring, max_size, max_degree, seed);
    let g = spec.build()?;
    let v = validate(&g);
    let d = degree(&g);
    let r = report(
        "random",
        "a seeded random functor of bounded degree",
        v.is_valid() && d <= max_degree,
        format!("degree {d}"),
        vec![describe(&spec, &g), v.to_string()],
        json!({ "seed": seed, "degree": d, "valid": v.is_valid(), "spec": spec.to_json() }),
    );
    Ok((r, spec))
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub ring: RingSpec,
    pub max_size: usize,
    pub degree: usize,
    pub first_seed: u64,
    pub count: usize,
    pub jobs: usize,
}

fn sweep_one(o: &SweepOptions, seed: u64) -> Result<Value, CliError> {
    let g = random_spec(o.ring, o.max_size, o.degree, seed).build()?;
    let v = check_vanishing(&g, o.degree, o.degree + 2)?;
    Ok(json!({
        "seed": seed,
        "degree": degree(&g),
        "limit_rank": v.limit_rank,
        "base_rank": v.base_rank,
        "iso": v.iso,
    }))
}

/// Checks the vanishing statement on `count` seeded random functors,
/// in parallel, merged in seed order.
pub fn cmd_sweep(o: &SweepOptions) -> Result<Report, CliError> {
    if o.max_size < o.degree + 2 {
        return Err(CliError::Usage(format!("N = {} is below degree + 2 = {}", o.max_size, o.degree + 2)));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(o.jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let seeds: Vec<u64> = (0..o.count as u64).map(|k| o.first_seed + k).collect();
    let rows: Vec<Value> = pool.install(|| seeds.par_iter().map(|&s| sweep_one(o, s)).collect::<Result<_, _>>())?;
    let failures: Vec<u64> =
        rows.iter().filter(|r| r["iso"] != json!(true)).map(|r| r["seed"].as_u64().expect("seed")).collect();
    let holds = failures.is_empty();
    Ok(report(
        "sweep",
        "for G of degree <= n and l = n + 2 the limit over surjections is G(*)",
        holds,
        format!("{} of {} instances agree", o.count - failures.len(), o.count),
        vec![format!(
            "ring {}, N = {}, degree <= {}, seeds {}..{}",
            o.ring,
            o.max_size,
            o.degree,
            o.first_seed,
            o.first_seed + o.count as u64
        )],
        json!({ "instances": rows, "failures": failures }),
    ))
}
