use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::diagramlimits::limit_over_surjections;
use crate::exactlin::{kernel_basis, rank, ExactMatrix, RingSpec};

use super::monomials::build_p;
use super::PolyError;

/// Default degree cap over Q.
pub const RATIONAL_DEGREE_CAP: usize = 12;

const NAMES: [&str; 6] = ["x", "y", "z", "w", "u", "v"];

/// A homogeneous polynomial in `vars` plain variables, coefficients kept
/// in the canonical form of the ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoly {
    ring: RingSpec,
    vars: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<u32>, BigRational>,
}

impl SymPoly {
    pub fn zero(ring: RingSpec, vars: usize, degree: usize) -> Self {
        SymPoly { ring, vars, degree, coeffs: BTreeMap::new() }
    }

    /// Adds `c · x^exps`; the exponents must have total `degree`.
    pub fn add_term(&mut self, exps: Vec<u32>, c: &BigRational) -> Result<(), PolyError> {
        if exps.len() != self.vars || exps.iter().sum::<u32>() as usize != self.degree {
            return Err(PolyError::NotHomogeneous(format!("{exps:?} in a degree-{} form", self.degree)));
        }
        let c = self.ring.reduce(c)?;
        let sum = self.ring.add(&self.coefficient(&exps), &c);
        if sum.is_zero() {
            self.coeffs.remove(&exps);
        } else {
            self.coeffs.insert(exps, sum);
        }
        Ok(())
    }

    fn add_i64(&mut self, exps: Vec<u32>, c: i64) {
        let c = self.ring.from_i64(c);
        self.add_term(exps, &c).expect("homogeneous by construction");
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigRational {
        self.coeffs.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Nonzero terms, highest exponent vector first.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.coeffs.iter().rev()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Replaces variable `j` by variable `targets[j]` of a polynomial in
    /// `new_vars` variables.
    pub fn substitute(&self, targets: &[usize], new_vars: usize) -> SymPoly {
        let mut out = SymPoly::zero(self.ring, new_vars, self.degree);
        for (exps, c) in &self.coeffs {
            let mut e = vec![0; new_vars];
            for (j, &k) in exps.iter().enumerate() {
                e[targets[j]] += k;
            }
            out.add_term(e, c).expect("substitution keeps the degree");
        }
        out
    }

    /// Invariant under every permutation of the variables.
    pub fn is_symmetric(&self) -> bool {
        permutations(self.vars).iter().all(|p| self.substitute(p, self.vars) == *self)
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let one = self.ring.from_i64(1);
        let terms: Vec<String> = self
            .terms()
            .map(|(exps, c)| {
                let mono: String = exps
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(j, &e)| if e == 1 { NAMES[j].to_string() } else { format!("{}^{e}", NAMES[j]) })
                    .collect();
                match (mono.is_empty(), *c == one) {
                    (true, _) => self.ring.format_scalar(c),
                    (false, true) => mono,
                    (false, false) => format!("{}{mono}", self.ring.format_scalar(c)),
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// Exponent vectors of degree `d` in `vars` variables, descending.
fn exponent_vectors(vars: usize, d: usize) -> Vec<Vec<u32>> {
    fn go(vars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == vars {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            go(vars, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if vars > 0 {
        go(vars, d as u32, &mut Vec::new(), &mut out);
    }
    out
}

/// Whether `f` is symmetric in three variables with `f(x,x,y) = f(x,y,y)`.
pub fn satisfies_constraints(f: &SymPoly) -> bool {
    f.vars() == 3 && f.is_symmetric() && f.substitute(&[0, 0, 1], 2) == f.substitute(&[0, 1, 1], 2)
}

/// Result of the three-variable oracle at one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymImplication {
    pub ring: RingSpec,
    pub degree: usize,
    pub monomials: usize,
    /// Dimension of the admissible `f`.
    pub space_dim: usize,
    /// `f ↦ f(x,x,x)` vanishes on the admissible space.
    pub map_is_zero: bool,
    pub witness: Option<SymPoly>,
    /// `f(x,x,x)` for the witness.
    pub witness_value: Option<SymPoly>,
}

fn degree_cap(ring: RingSpec) -> Result<usize, PolyError> {
    match ring {
        RingSpec::Rationals => Ok(RATIONAL_DEGREE_CAP),
        RingSpec::PrimeField(p) => Ok(p as usize + 3),
        RingSpec::Integers => Err(PolyError::WrongRing(ring)),
    }
}

/// Brute force over all symmetric degree-`d` forms in `x, y, z`.
pub fn sym_poly_implication(ring: RingSpec, d: usize) -> Result<SymImplication, PolyError> {
    sym_poly_implication_capped(ring, d, degree_cap(ring)?)
}

pub fn sym_poly_implication_capped(ring: RingSpec, d: usize, cap: usize) -> Result<SymImplication, PolyError> {
    degree_cap(ring)?;
    if d == 0 {
        return Err(PolyError::ZeroDegree);
    }
    if d > cap {
        return Err(PolyError::DegreeCap { degree: d, cap });
    }
    let monos = exponent_vectors(3, d);
    let index: BTreeMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(k, e)| (e, k)).collect();
    let pairs = exponent_vectors(2, d);
    let pair_index: BTreeMap<&Vec<u32>, usize> = pairs.iter().enumerate().map(|(k, e)| (e, k)).collect();

    let rows = 2 * monos.len() + pairs.len();
    let mut c = ExactMatrix::zeros(ring, rows, monos.len());
    for (k, e) in monos.iter().enumerate() {
        for (g, image) in [vec![e[1], e[0], e[2]], vec![e[2], e[0], e[1]]].into_iter().enumerate() {
            let row = 2 * k + g;
            c.set_i64(row, k, 1);
            let j = index[&image];
            let current = c.entry(row, j);
            c.set(row, j, &ring.add(&current, &ring.from_i64(-1)));
        }
        // f(x,x,y) − f(x,y,y), read off coefficient by coefficient
        let base = 2 * monos.len();
        for (sign, image) in [(1, vec![e[0] + e[1], e[2]]), (-1, vec![e[0], e[1] + e[2]])] {
            let row = base + pair_index[&image];
            let current = c.entry(row, k);
            c.set(row, k, &ring.add(&current, &ring.from_i64(sign)));
        }
    }
    let space = kernel_basis(&c);
    let h = ExactMatrix::from_fn(ring, 1, monos.len(), |_, _| 1);
    let values = &h * &space;
    let hit = (0..space.cols()).find(|&k| !values.entry(0, k).is_zero());
    let (witness, witness_value) = match hit {
        None => (None, None),
        Some(k) => {
            let mut f = SymPoly::zero(ring, 3, d);
            for (row, e) in monos.iter().enumerate() {
                f.add_term(e.clone(), &space.entry(row, k))?;
            }
            let value = f.substitute(&[0, 0, 0], 1);
            (Some(f), Some(value))
        }
    };
    Ok(SymImplication {
        ring,
        degree: d,
        monomials: monos.len(),
        space_dim: space.cols(),
        map_is_zero: hit.is_none(),
        witness,
        witness_value,
    })
}

/// The same question asked of `P_{1,d}` through the limit over
/// `FinSetSurj_{n.e.,≤ℓ}`: is the projection of the limit to size 1 zero?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjectionLimitCheck {
    pub ring: RingSpec,
    pub degree: usize,
    pub ell: usize,
    pub limit_rank: usize,
    pub size_one_rank: usize,
}

impl SurjectionLimitCheck {
    pub fn map_is_zero(&self) -> bool {
        self.size_one_rank == 0
    }
}

pub fn surjection_limit_check(ring: RingSpec, d: usize, ell: usize) -> Result<SurjectionLimitCheck, PolyError> {
    let g = build_p(ring, 1, d, ell);
    let lim = limit_over_surjections(&g, ell)?;
    Ok(SurjectionLimitCheck { ring, degree: d, ell, limit_rank: lim.rank(), size_one_rank: rank(&lim.component(1)) })
}

/// The degree-`p` form over `F_p` built from `xyz`, power sums and the
/// cyclic sums with coefficient `(p+1)/2`, together with its evaluations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharpCounterexample {
    pub p: u64,
    pub f: SymPoly,
    /// `f(x,x,y)`.
    pub g: SymPoly,
    /// `f(x,y,y)`.
    pub g_other: SymPoly,
    /// `f(x,x,x)`.
    pub h: SymPoly,
    pub symmetric: bool,
    pub g_symmetric: bool,
    /// `g = x^{p-2}y² + x^{p-3}y³ + … + x²y^{p-2}`.
    pub g_as_printed: bool,
    /// `h = (p-1)x^p`.
    pub h_as_printed: bool,
    pub h_nonzero: bool,
    /// Coefficient of `x^p` in `h`, in `0..p`.
    pub h_coefficient: BigRational,
    pub in_constraint_space: bool,
}

pub fn charp_counterexample(p: u64) -> Result<CharpCounterexample, PolyError> {
    if p < 5 {
        return Err(PolyError::PrimeTooSmall(p));
    }
    let ring = RingSpec::prime_field(p)?;
    let d = p as usize;
    let q = p as u32;
    let half = ring.inv(&ring.from_i64(2)).expect("2 is a unit for p >= 5");
    let mut f = SymPoly::zero(ring, 3, d);
    // xyz · (x^{p-3} + y^{p-3} + z^{p-3})
    for j in 0..3 {
        let mut e = vec![1, 1, 1];
        e[j] += q - 3;
        f.add_i64(e, 1);
    }
    // xyz · (p+1)/2 · Σ_cyc (u^{p-4}v + … + uv^{p-4})
    for (u, v) in [(0, 1), (1, 2), (2, 0)] {
        for k in 1..=q - 4 {
            let mut e = vec![1, 1, 1];
            e[u] += q - 3 - k;
            e[v] += k;
            f.add_term(e, &half)?;
        }
    }
    let g = f.substitute(&[0, 0, 1], 2);
    let g_other = f.substitute(&[0, 1, 1], 2);
    let h = f.substitute(&[0, 0, 0], 1);
    let mut printed_g = SymPoly::zero(ring, 2, d);
    for k in 2..=q - 2 {
        printed_g.add_i64(vec![q - k, k], 1);
    }
    let mut printed_h = SymPoly::zero(ring, 1, d);
    printed_h.add_i64(vec![q], p as i64 - 1);
    Ok(CharpCounterexample {
        p,
        symmetric: f.is_symmetric(),
        g_symmetric: g.is_symmetric(),
        g_as_printed: g == printed_g,
        h_as_printed: h == printed_h,
        h_nonzero: !h.is_zero(),
        h_coefficient: h.coefficient(&[q]),
        in_constraint_space: satisfies_constraints(&f),
        f,
        g,
        g_other,
        h,
    })
}
