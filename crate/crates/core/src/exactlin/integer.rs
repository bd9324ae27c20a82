//! Smith normal form over Z with both transformation matrices and their
//! inverses tracked through every elementary operation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) struct Smith {
    pub d: Vec<BigInt>,
    /// `l * a * r = d`
    pub l: Vec<BigInt>,
    pub l_inv: Vec<BigInt>,
    pub r: Vec<BigInt>,
    pub r_inv: Vec<BigInt>,
    pub invariants: Vec<BigInt>,
}

fn identity(n: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = BigInt::one();
    }
    v
}

struct State {
    rows: usize,
    cols: usize,
    a: Vec<BigInt>,
    l: Vec<BigInt>,
    l_inv: Vec<BigInt>,
    r: Vec<BigInt>,
    r_inv: Vec<BigInt>,
}

impl State {
    fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.a[i * self.cols + j]
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let (n, c) = (self.rows, self.cols);
        for k in 0..c {
            self.a.swap(i * c + k, j * c + k);
        }
        for k in 0..n {
            self.l.swap(i * n + k, j * n + k);
            self.l_inv.swap(k * n + i, k * n + j);
        }
    }

    /// row[target] -= q * row[src]
    fn row_axpy(&mut self, target: usize, src: usize, q: &BigInt) {
        let (n, c) = (self.rows, self.cols);
        for k in 0..c {
            let t = &self.a[src * c + k] * q;
            self.a[target * c + k] -= t;
        }
        for k in 0..n {
            let t = &self.l[src * n + k] * q;
            self.l[target * n + k] -= t;
            let t = &self.l_inv[k * n + target] * q;
            self.l_inv[k * n + src] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        let (n, c) = (self.rows, self.cols);
        for k in 0..c {
            self.a[i * c + k] = -&self.a[i * c + k];
        }
        for k in 0..n {
            self.l[i * n + k] = -&self.l[i * n + k];
            self.l_inv[k * n + i] = -&self.l_inv[k * n + i];
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let (n, c) = (self.rows, self.cols);
        for k in 0..n {
            self.a.swap(k * c + i, k * c + j);
        }
        for k in 0..c {
            self.r.swap(k * c + i, k * c + j);
            self.r_inv.swap(i * c + k, j * c + k);
        }
    }

    /// col[target] -= q * col[src]
    fn col_axpy(&mut self, target: usize, src: usize, q: &BigInt) {
        let (n, c) = (self.rows, self.cols);
        for k in 0..n {
            let t = &self.a[k * c + src] * q;
            self.a[k * c + target] -= t;
        }
        for k in 0..c {
            let t = &self.r[k * c + src] * q;
            self.r[k * c + target] -= t;
            let t = &self.r_inv[target * c + k] * q;
            self.r_inv[src * c + k] += t;
        }
    }
}

pub(crate) fn smith(a: &[BigInt], rows: usize, cols: usize) -> Smith {
    let mut s = State {
        rows,
        cols,
        a: a.to_vec(),
        l: identity(rows),
        l_inv: identity(rows),
        r: identity(cols),
        r_inv: identity(cols),
    };
    let mut invariants = Vec::new();
    let steps = rows.min(cols);
    for t in 0..steps {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = s.at(i, j);
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < s.at(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap_rows(t, pi);
        s.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if s.at(i, t).is_zero() {
                    continue;
                }
                let q = s.at(i, t).div_floor(s.at(t, t));
                s.row_axpy(i, t, &q);
                if !s.at(i, t).is_zero() {
                    s.swap_rows(t, i);
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if s.at(t, j).is_zero() {
                    continue;
                }
                let q = s.at(t, j).div_floor(s.at(t, t));
                s.col_axpy(j, t, &q);
                if !s.at(t, j).is_zero() {
                    s.swap_cols(t, j);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let pivot = s.at(t, t).clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !s.at(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => s.row_axpy(t, i, &-BigInt::one()),
                None => break,
            }
        }
        if s.at(t, t).is_negative() {
            s.negate_row(t);
        }
        invariants.push(s.at(t, t).clone());
    }
    Smith { d: s.a, l: s.l, l_inv: s.l_inv, r: s.r, r_inv: s.r_inv, invariants }
}
