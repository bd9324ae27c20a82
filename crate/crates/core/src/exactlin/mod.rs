//! Exact linear algebra over Q, F_p and Z.
//!
//! Over Z every "basis" is a basis of a free module: kernels are saturated
//! sublattices and images of idempotents are direct summands, so both are
//! free and have honest Z-bases.

mod field;
mod integer;
mod matrix;
mod ring;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use matrix::ExactMatrix;
pub use ring::RingSpec;

pub(crate) use matrix::Entries;
pub(crate) use ring::{Arith, FpArith, QArith};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(RingSpec, RingSpec),
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("value {0} is not an element of {1}")]
    NotInRing(String, RingSpec),
    #[error("cannot parse scalar {0:?}")]
    BadScalar(String),
    #[error("unknown ring {0:?} (expected Q, Z or Fp:<p>)")]
    BadRing(String),
    #[error("matrix is not idempotent")]
    NotIdempotent,
    #[error("operation needs {expected}, got ring {found}")]
    WrongRing { expected: &'static str, found: RingSpec },
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("cokernel is not a free Z-module (invariant factors {0:?})")]
    NonFreeCokernel(Vec<String>),
}

fn to_field(m: &ExactMatrix) -> ExactMatrix {
    match m.ring {
        RingSpec::Integers => m.change_ring(RingSpec::Rationals).expect("Z embeds in Q"),
        _ => m.clone(),
    }
}

/// Rank over the fraction field (over Q for integer matrices).
pub fn rank(m: &ExactMatrix) -> usize {
    let f = to_field(m);
    match &f.entries {
        Entries::Q(v) => field::rank(QArith, v, f.rows, f.cols),
        Entries::Fp(v) => field::rank(FpArith { p: f.ring.characteristic() }, v, f.rows, f.cols),
        Entries::Z(_) => unreachable!(),
    }
}

fn field_kernel(m: &ExactMatrix) -> ExactMatrix {
    let (entries, k) = match &m.entries {
        Entries::Q(v) => {
            let (out, k) = field::kernel(QArith, v, m.rows, m.cols);
            (Entries::Q(out), k)
        }
        Entries::Fp(v) => {
            let (out, k) = field::kernel(FpArith { p: m.ring.characteristic() }, v, m.rows, m.cols);
            (Entries::Fp(out), k)
        }
        Entries::Z(_) => unreachable!("integer kernels go through saturation"),
    };
    ExactMatrix { ring: m.ring, rows: m.cols, cols: k, entries }
}

/// Columns form a basis of `ker(m)`. Over Z the basis spans the full
/// (saturated) integer kernel.
pub fn kernel_basis(m: &ExactMatrix) -> ExactMatrix {
    match m.ring {
        RingSpec::Integers => {
            let rational = field_kernel(&to_field(m));
            let primitive = primitive_columns(&rational);
            saturate(&primitive)
        }
        _ => field_kernel(m),
    }
}

/// Scale every column of a rational matrix to a primitive integer vector.
fn primitive_columns(m: &ExactMatrix) -> ExactMatrix {
    let mut out = ExactMatrix::zeros(RingSpec::Integers, m.rows, m.cols);
    for j in 0..m.cols {
        let col: Vec<BigRational> = (0..m.rows).map(|i| m.entry(i, j)).collect();
        let lcm = col.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = col.iter().map(|x| (x * &lcm).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        for (i, x) in ints.iter().enumerate() {
            let v = if g.is_zero() { x.clone() } else { x / &g };
            out.set(i, j, &BigRational::from_integer(v));
        }
    }
    out
}

/// Basis of the saturation `span_Q(B) ∩ Z^n` for a full-column-rank integer B.
fn saturate(b: &ExactMatrix) -> ExactMatrix {
    let Entries::Z(v) = &b.entries else { unreachable!() };
    let s = integer::smith(v, b.rows, b.cols);
    if s.invariants.iter().all(|d| d.is_one()) {
        return b.clone();
    }
    let k = s.invariants.len();
    let u = ExactMatrix { ring: RingSpec::Integers, rows: b.rows, cols: b.rows, entries: Entries::Z(s.l_inv) };
    u.col_block(0, k)
}

/// Basis of the intersection of the kernels of `ms`, all with `ambient`
/// columns. No matrices means the whole ambient space.
pub fn intersect_kernels(ring: RingSpec, ambient: usize, ms: &[&ExactMatrix]) -> Result<ExactMatrix, LinAlgError> {
    if let Some(bad) = ms.iter().find(|m| m.cols != ambient || m.ring != ring) {
        return Err(LinAlgError::DimensionMismatch(format!(
            "kernel operand has {} columns over {}, expected {ambient} over {ring}",
            bad.cols, bad.ring
        )));
    }
    if ms.is_empty() {
        return Ok(ExactMatrix::identity(ring, ambient));
    }
    Ok(kernel_basis(&ExactMatrix::vstack(ring, ambient, ms)))
}

/// Factor an idempotent `e = p q` with `q p = 1`. The columns of `p` are a
/// basis of the image of `e`.
pub fn split_idempotent(e: &ExactMatrix) -> Result<(ExactMatrix, ExactMatrix), LinAlgError> {
    if !e.is_square() {
        return Err(LinAlgError::NotSquare(e.rows, e.cols));
    }
    if &(e * e) != e {
        return Err(LinAlgError::NotIdempotent);
    }
    let id = ExactMatrix::identity(e.ring, e.rows);
    let p = kernel_basis(&(&id - e));
    let q = solve_matrix(&p, e)?.expect("image of an idempotent is spanned by the fixed vectors");
    Ok((p, q))
}

/// `m = u d v` with `u`, `v` unimodular and `d` diagonal, `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: ExactMatrix,
    pub d: ExactMatrix,
    pub v: ExactMatrix,
    pub u_inv: ExactMatrix,
    pub v_inv: ExactMatrix,
    /// Nonzero diagonal entries of `d`, in order.
    pub invariants: Vec<BigInt>,
}

pub fn smith_normal_form(m: &ExactMatrix) -> Result<SmithForm, LinAlgError> {
    let Entries::Z(v) = &m.entries else {
        return Err(LinAlgError::WrongRing { expected: "Z", found: m.ring });
    };
    let s = integer::smith(v, m.rows, m.cols);
    let z = RingSpec::Integers;
    let wrap = |rows, cols, data| ExactMatrix { ring: z, rows, cols, entries: Entries::Z(data) };
    Ok(SmithForm {
        u: wrap(m.rows, m.rows, s.l_inv),
        u_inv: wrap(m.rows, m.rows, s.l),
        d: wrap(m.rows, m.cols, s.d),
        v: wrap(m.cols, m.cols, s.r_inv),
        v_inv: wrap(m.cols, m.cols, s.r),
        invariants: s.invariants,
    })
}

/// Some `x` with `m x = b`, or `None` when no solution exists over the ring.
pub fn solve(m: &ExactMatrix, b: &ExactMatrix) -> Result<Option<ExactMatrix>, LinAlgError> {
    if b.cols != 1 {
        return Err(LinAlgError::DimensionMismatch(format!(
            "right-hand side must be a column, got {} columns",
            b.cols
        )));
    }
    solve_matrix(m, b)
}

/// Solve `m x = b` column by column (all columns must be solvable).
pub fn solve_matrix(m: &ExactMatrix, b: &ExactMatrix) -> Result<Option<ExactMatrix>, LinAlgError> {
    m.same_ring(b)?;
    if m.rows != b.rows {
        return Err(LinAlgError::DimensionMismatch(format!(
            "system has {} equations but right-hand side has {} rows",
            m.rows, b.rows
        )));
    }
    let (rows, cols, nrhs) = (m.rows, m.cols, b.cols);
    let wrap = |entries| ExactMatrix { ring: m.ring, rows: cols, cols: nrhs, entries };
    match (&m.entries, &b.entries) {
        (Entries::Q(a), Entries::Q(y)) => Ok(field::solve(QArith, a, rows, cols, y, nrhs).map(|x| wrap(Entries::Q(x)))),
        (Entries::Fp(a), Entries::Fp(y)) => {
            let ar = FpArith { p: m.ring.characteristic() };
            Ok(field::solve(ar, a, rows, cols, y, nrhs).map(|x| wrap(Entries::Fp(x))))
        }
        (Entries::Z(_), Entries::Z(_)) => Ok(solve_integer(m, b)),
        _ => unreachable!(),
    }
}

fn solve_integer(m: &ExactMatrix, b: &ExactMatrix) -> Option<ExactMatrix> {
    let s = smith_normal_form(m).expect("integer matrix");
    // d (v x) = u^{-1} b
    let c = &s.u_inv * b;
    let rank = s.invariants.len();
    let mut y = ExactMatrix::zeros(RingSpec::Integers, m.cols, b.cols);
    for j in 0..b.cols {
        for i in 0..m.rows {
            let ci = c.entry(i, j);
            if i < rank {
                let d = BigRational::from_integer(s.invariants[i].clone());
                let q = ci / d;
                if !q.is_integer() {
                    return None;
                }
                y.set(i, j, &q);
            } else if !ci.is_zero() {
                return None;
            }
        }
    }
    Some(&s.v_inv * &y)
}

pub fn determinant(m: &ExactMatrix) -> Result<BigRational, LinAlgError> {
    if !m.is_square() {
        return Err(LinAlgError::NotSquare(m.rows, m.cols));
    }
    let f = to_field(m);
    Ok(match &f.entries {
        Entries::Q(v) => field::determinant(QArith, v, f.rows),
        Entries::Fp(v) => {
            let ar = FpArith { p: f.ring.characteristic() };
            ar.to_rational(&field::determinant(ar, v, f.rows))
        }
        Entries::Z(_) => unreachable!(),
    })
}

/// Invertible over the ring itself: nonzero determinant over a field, ±1 over Z.
pub fn is_invertible(m: &ExactMatrix) -> bool {
    match determinant(m) {
        Ok(d) => match m.ring {
            RingSpec::Integers => d.abs().is_one(),
            _ => !d.is_zero(),
        },
        Err(_) => false,
    }
}

pub fn inverse(m: &ExactMatrix) -> Option<ExactMatrix> {
    if !is_invertible(m) {
        return None;
    }
    solve_matrix(m, &ExactMatrix::identity(m.ring, m.rows)).ok().flatten()
}

/// Some `l` with `l k = 1`; exists whenever the columns of `k` are a basis
/// of a direct summand (over Z: a saturated sublattice).
pub fn left_inverse(k: &ExactMatrix) -> Option<ExactMatrix> {
    let y = solve_matrix(&k.transpose(), &ExactMatrix::identity(k.ring, k.cols)).ok()??;
    Some(y.transpose())
}

/// `(pi, s)` with `pi m = 0`, `pi s = 1` and `pi` onto the cokernel of `m`.
/// Over Z the cokernel must be free.
pub fn cokernel_projection(m: &ExactMatrix) -> Result<(ExactMatrix, ExactMatrix), LinAlgError> {
    if m.ring == RingSpec::Integers {
        let s = smith_normal_form(m)?;
        if s.invariants.iter().any(|d| !d.is_one()) {
            return Err(LinAlgError::NonFreeCokernel(s.invariants.iter().map(|d| d.to_string()).collect()));
        }
    }
    let pi = kernel_basis(&m.transpose()).transpose();
    let q = pi.rows;
    let s = solve_matrix(&pi, &ExactMatrix::identity(m.ring, q))?.expect("left kernel basis is a direct summand");
    Ok((pi, s))
}
