use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::ring::{Arith, FpArith, QArith, RingSpec, ZArith};
use super::LinAlgError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Entries {
    Q(Vec<BigRational>),
    Fp(Vec<u64>),
    Z(Vec<BigInt>),
}

/// Storage types that know how to wrap themselves back into [`Entries`].
pub(crate) trait Store: Arith {
    fn wrap(&self, v: Vec<Self::E>) -> Entries;
}

impl Store for QArith {
    fn wrap(&self, v: Vec<BigRational>) -> Entries {
        Entries::Q(v)
    }
}

impl Store for FpArith {
    fn wrap(&self, v: Vec<u64>) -> Entries {
        Entries::Fp(v)
    }
}

impl Store for ZArith {
    fn wrap(&self, v: Vec<BigInt>) -> Entries {
        Entries::Z(v)
    }
}

macro_rules! with_arith {
    ($m:expr, $ar:ident, $v:ident => $body:expr) => {
        match &$m.entries {
            Entries::Q($v) => {
                let $ar = QArith;
                $body
            }
            Entries::Fp($v) => {
                let $ar = FpArith { p: $m.ring.characteristic() };
                $body
            }
            Entries::Z($v) => {
                let $ar = ZArith;
                $body
            }
        }
    };
}

macro_rules! with_arith2 {
    ($a:expr, $b:expr, $ar:ident, $x:ident, $y:ident => $body:expr) => {
        match (&$a.entries, &$b.entries) {
            (Entries::Q($x), Entries::Q($y)) => {
                let $ar = QArith;
                $body
            }
            (Entries::Fp($x), Entries::Fp($y)) => {
                let $ar = FpArith { p: $a.ring.characteristic() };
                $body
            }
            (Entries::Z($x), Entries::Z($y)) => {
                let $ar = ZArith;
                $body
            }
            _ => unreachable!("ring mismatch is rejected before dispatch"),
        }
    };
}

/// Dense matrix over Q, F_p or Z, stored row-major.
///
/// Matrices with zero rows or zero columns are ordinary values; they carry
/// the rank-0 modules that show up throughout the functor computations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    pub(crate) ring: RingSpec,
    pub(crate) rows: usize,
    pub(crate) cols: usize,
    pub(crate) entries: Entries,
}

fn zeros_for<A: Store>(ar: A, n: usize) -> Entries {
    ar.wrap(vec![ar.zero(); n])
}

impl ExactMatrix {
    pub fn zeros(ring: RingSpec, rows: usize, cols: usize) -> Self {
        let n = rows * cols;
        let entries = match ring {
            RingSpec::Rationals => zeros_for(QArith, n),
            RingSpec::PrimeField(p) => zeros_for(FpArith { p: p as u64 }, n),
            RingSpec::Integers => zeros_for(ZArith, n),
        };
        ExactMatrix { ring, rows, cols, entries }
    }

    pub fn identity(ring: RingSpec, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set_i64(i, i, 1);
        }
        m
    }

    pub fn from_i64(ring: RingSpec, rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols, "entry count must be rows*cols");
        let mut m = Self::zeros(ring, rows, cols);
        for (k, v) in values.iter().enumerate() {
            m.set_i64(k / cols.max(1), k % cols.max(1), *v);
        }
        m
    }

    pub fn from_rationals(
        ring: RingSpec,
        rows: usize,
        cols: usize,
        values: &[BigRational],
    ) -> Result<Self, LinAlgError> {
        if values.len() != rows * cols {
            return Err(LinAlgError::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", values.len())));
        }
        let mut m = Self::zeros(ring, rows, cols);
        for (k, v) in values.iter().enumerate() {
            let v = ring.reduce(v)?;
            m.set(k / cols, k % cols, &v);
        }
        Ok(m)
    }

    pub fn from_fn(ring: RingSpec, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut m = Self::zeros(ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                if v != 0 {
                    m.set_i64(i, j, v);
                }
            }
        }
        m
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry as its canonical rational representative.
    pub fn entry(&self, i: usize, j: usize) -> BigRational {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) out of range");
        let k = i * self.cols + j;
        with_arith!(self, ar, v => ar.to_rational(&v[k]))
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, value: &BigRational) {
        let k = i * self.cols + j;
        let ring = self.ring;
        match &mut self.entries {
            Entries::Q(v) => v[k] = value.clone(),
            Entries::Fp(v) => v[k] = FpArith { p: ring.characteristic() }.from_rational(value),
            Entries::Z(v) => v[k] = value.to_integer(),
        }
    }

    pub(crate) fn set_i64(&mut self, i: usize, j: usize, value: i64) {
        let k = i * self.cols + j;
        let ring = self.ring;
        match &mut self.entries {
            Entries::Q(v) => v[k] = BigRational::from_integer(value.into()),
            Entries::Fp(v) => {
                let p = ring.characteristic() as i64;
                v[k] = value.rem_euclid(p) as u64
            }
            Entries::Z(v) => v[k] = value.into(),
        }
    }

    /// Row operation `row[target] += c · row[source]`.
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, c: i64) {
        let c = self.ring.from_i64(c);
        for j in 0..self.cols {
            let v = self.ring.add(&self.entry(target, j), &self.ring.mul(&c, &self.entry(source, j)));
            self.set(target, j, &v);
        }
    }

    pub fn is_zero(&self) -> bool {
        with_arith!(self, ar, v => v.iter().all(|x| ar.is_zero(x)))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.ring, self.rows)
    }

    /// All entries as rationals, row-major.
    pub fn to_rationals(&self) -> Vec<BigRational> {
        with_arith!(self, ar, v => v.iter().map(|x| ar.to_rational(x)).collect())
    }

    /// The same integer matrix viewed over another ring (Z → Q, Z → F_p,
    /// Q → Z when integral, ...).
    pub fn change_ring(&self, ring: RingSpec) -> Result<Self, LinAlgError> {
        Self::from_rationals(ring, self.rows, self.cols, &self.to_rationals())
    }

    pub(crate) fn same_ring(&self, other: &Self) -> Result<(), LinAlgError> {
        if self.ring != other.ring {
            return Err(LinAlgError::RingMismatch(self.ring, other.ring));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LinAlgError> {
        self.same_ring(other)?;
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let entries = with_arith2!(self, other, ar, a, b => {
            let mut out = vec![ar.zero(); n * m];
            for i in 0..n {
                for t in 0..k {
                    let x = &a[i * k + t];
                    if ar.is_zero(x) {
                        continue;
                    }
                    for j in 0..m {
                        let y = &b[t * m + j];
                        if !ar.is_zero(y) {
                            out[i * m + j] = ar.add(&out[i * m + j], &ar.mul(x, y));
                        }
                    }
                }
            }
            ar.wrap(out)
        });
        Ok(ExactMatrix { ring: self.ring, rows: n, cols: m, entries })
    }

    fn zip_with(&self, other: &Self, subtract: bool) -> Result<Self, LinAlgError> {
        self.same_ring(other)?;
        if self.shape() != other.shape() {
            return Err(LinAlgError::DimensionMismatch(format!(
                "cannot combine {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = with_arith2!(self, other, ar, a, b => {
            let out: Vec<_> = a
                .iter()
                .zip(b.iter())
                .map(|(x, y)| if subtract { ar.sub(x, y) } else { ar.add(x, y) })
                .collect();
            ar.wrap(out)
        });
        Ok(ExactMatrix { ring: self.ring, rows: self.rows, cols: self.cols, entries })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LinAlgError> {
        self.zip_with(other, false)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LinAlgError> {
        self.zip_with(other, true)
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = self.ring.from_i64(c);
        self.map_entries(|x| self.ring.mul(x, &c))
    }

    fn map_entries(&self, f: impl Fn(&BigRational) -> BigRational) -> Self {
        let vals: Vec<_> = self.to_rationals().iter().map(f).collect();
        Self::from_rationals(self.ring, self.rows, self.cols, &vals).expect("entries stay in ring")
    }

    pub fn transpose(&self) -> Self {
        let (r, c) = (self.rows, self.cols);
        let entries = with_arith!(self, ar, v => {
            let mut out = Vec::with_capacity(r * c);
            for j in 0..c {
                for i in 0..r {
                    out.push(v[i * c + j].clone());
                }
            }
            ar.wrap(out)
        });
        ExactMatrix { ring: self.ring, rows: c, cols: r, entries }
    }

    /// Sub-matrix picking the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let c = self.cols;
        let entries = with_arith!(self, ar, v => {
            let mut out = Vec::with_capacity(rows.len() * cols.len());
            for &i in rows {
                for &j in cols {
                    out.push(v[i * c + j].clone());
                }
            }
            ar.wrap(out)
        });
        ExactMatrix { ring: self.ring, rows: rows.len(), cols: cols.len(), entries }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &cols)
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, cols)
    }

    pub fn row_block(&self, start: usize, len: usize) -> Self {
        let rows: Vec<usize> = (start..start + len).collect();
        self.select_rows(&rows)
    }

    pub fn col_block(&self, start: usize, len: usize) -> Self {
        let cols: Vec<usize> = (start..start + len).collect();
        self.select_cols(&cols)
    }

    pub fn column(&self, j: usize) -> Self {
        self.select_cols(&[j])
    }

    /// Copy `block` into `self` with its top-left corner at `(row, col)`.
    pub fn with_block(mut self, row: usize, col: usize, block: &Self) -> Self {
        assert_eq!(self.ring, block.ring);
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        let c = self.cols;
        let bc = block.cols;
        match (&mut self.entries, &block.entries) {
            (Entries::Q(a), Entries::Q(b)) => copy_block(a, c, b, bc, block.rows, row, col),
            (Entries::Fp(a), Entries::Fp(b)) => copy_block(a, c, b, bc, block.rows, row, col),
            (Entries::Z(a), Entries::Z(b)) => copy_block(a, c, b, bc, block.rows, row, col),
            _ => unreachable!(),
        }
        self
    }

    /// Adds `block` into the window starting at `(row, col)`.
    pub(crate) fn add_block(mut self, row: usize, col: usize, block: &Self) -> Self {
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                let b = block.entry(i, j);
                if b != BigRational::from_integer(0.into()) {
                    let v = self.entry(row + i, col + j) + b;
                    self.set(row + i, col + j, &v);
                }
            }
        }
        self
    }

    /// Stack matrices with `cols` columns on top of each other.
    pub fn vstack(ring: RingSpec, cols: usize, parts: &[&Self]) -> Self {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = Self::zeros(ring, rows, cols);
        let mut r = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "vstack column mismatch");
            out = out.with_block(r, 0, p);
            r += p.rows;
        }
        out
    }

    pub fn hstack(ring: RingSpec, rows: usize, parts: &[&Self]) -> Self {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(ring, rows, cols);
        let mut c = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "hstack row mismatch");
            out = out.with_block(0, c, p);
            c += p.cols;
        }
        out
    }

    pub fn block_diag(ring: RingSpec, parts: &[&Self]) -> Self {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(ring, rows, cols);
        let (mut r, mut c) = (0, 0);
        for p in parts {
            out = out.with_block(r, c, p);
            r += p.rows;
            c += p.cols;
        }
        out
    }

    /// Index of the only nonzero entry of each column, if the matrix is a
    /// 0/1 "monomial" matrix. Used by the hypercube decomposition checks.
    pub fn column_support(&self, j: usize) -> Vec<usize> {
        (0..self.rows).filter(|&i| with_arith!(self, ar, v => !ar.is_zero(&v[i * self.cols + j]))).collect()
    }
}

fn copy_block<T: Clone>(
    dst: &mut [T],
    dst_cols: usize,
    src: &[T],
    src_cols: usize,
    src_rows: usize,
    row: usize,
    col: usize,
) {
    for i in 0..src_rows {
        for j in 0..src_cols {
            dst[(row + i) * dst_cols + col + j] = src[i * src_cols + j].clone();
        }
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_mul(rhs).expect("matrix product")
    }
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_add(rhs).expect("matrix sum")
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_sub(rhs).expect("matrix difference")
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        self.scale(-1)
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactMatrix[{}; {}x{}]{}", self.ring, self.rows, self.cols, self)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.ring.format_scalar(&self.entry(i, j)))?;
            }
        }
        write!(f, "]")
    }
}
