//! Gauss-Jordan elimination over a field, generic in the element type.

use super::ring::FieldArith;

/// Reduced row echelon form in place. Pivots are searched only among the
/// first `pivot_cols` columns; the first nonzero row wins. Returns the pivot
/// column of each pivot row, in row order.
pub(crate) fn rref<A: FieldArith>(ar: A, v: &mut [A::E], rows: usize, cols: usize, pivot_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..pivot_cols {
        if prow == rows {
            break;
        }
        let Some(r) = (prow..rows).find(|&r| !ar.is_zero(&v[r * cols + col])) else {
            continue;
        };
        if r != prow {
            for j in 0..cols {
                v.swap(r * cols + j, prow * cols + j);
            }
        }
        let inv = ar.inv(&v[prow * cols + col]);
        for j in col..cols {
            let k = prow * cols + j;
            v[k] = ar.mul(&v[k], &inv);
        }
        for i in 0..rows {
            if i == prow {
                continue;
            }
            let factor = v[i * cols + col].clone();
            if ar.is_zero(&factor) {
                continue;
            }
            for j in col..cols {
                let pv = &v[prow * cols + j];
                if ar.is_zero(pv) {
                    continue;
                }
                let t = ar.mul(&factor, pv);
                let k = i * cols + j;
                v[k] = ar.sub(&v[k], &t);
            }
        }
        pivots.push(col);
        prow += 1;
    }
    pivots
}

pub(crate) fn rank<A: FieldArith>(ar: A, v: &[A::E], rows: usize, cols: usize) -> usize {
    let mut w = v.to_vec();
    rref(ar, &mut w, rows, cols, cols).len()
}

/// Kernel basis as a `cols x k` row-major matrix; one column per free
/// variable, with a 1 in that variable's slot.
pub(crate) fn kernel<A: FieldArith>(ar: A, v: &[A::E], rows: usize, cols: usize) -> (Vec<A::E>, usize) {
    let mut w = v.to_vec();
    let pivots = rref(ar, &mut w, rows, cols, cols);
    let is_pivot: Vec<bool> = {
        let mut p = vec![false; cols];
        for &c in &pivots {
            p[c] = true;
        }
        p
    };
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let k = free.len();
    let mut out = vec![ar.zero(); cols * k];
    for (t, &f) in free.iter().enumerate() {
        out[f * k + t] = ar.one();
        for (i, &pc) in pivots.iter().enumerate() {
            out[pc * k + t] = ar.neg(&w[i * cols + f]);
        }
    }
    (out, k)
}

/// Solve `M X = B` for `B` with `nrhs` columns. Free variables are set to 0.
pub(crate) fn solve<A: FieldArith>(
    ar: A,
    m: &[A::E],
    rows: usize,
    cols: usize,
    b: &[A::E],
    nrhs: usize,
) -> Option<Vec<A::E>> {
    let width = cols + nrhs;
    let mut w = Vec::with_capacity(rows * width);
    for i in 0..rows {
        w.extend_from_slice(&m[i * cols..(i + 1) * cols]);
        w.extend_from_slice(&b[i * nrhs..(i + 1) * nrhs]);
    }
    let pivots = rref(ar, &mut w, rows, width, cols);
    for i in pivots.len()..rows {
        if (0..nrhs).any(|j| !ar.is_zero(&w[i * width + cols + j])) {
            return None;
        }
    }
    let mut x = vec![ar.zero(); cols * nrhs];
    for (i, &pc) in pivots.iter().enumerate() {
        for j in 0..nrhs {
            x[pc * nrhs + j] = w[i * width + cols + j].clone();
        }
    }
    Some(x)
}

pub(crate) fn determinant<A: FieldArith>(ar: A, v: &[A::E], n: usize) -> A::E {
    let mut w = v.to_vec();
    let mut det = ar.one();
    for col in 0..n {
        let Some(r) = (col..n).find(|&r| !ar.is_zero(&w[r * n + col])) else {
            return ar.zero();
        };
        if r != col {
            for j in 0..n {
                w.swap(r * n + j, col * n + j);
            }
            det = ar.neg(&det);
        }
        let pivot = w[col * n + col].clone();
        det = ar.mul(&det, &pivot);
        let inv = ar.inv(&pivot);
        for i in col + 1..n {
            let factor = ar.mul(&w[i * n + col], &inv);
            if ar.is_zero(&factor) {
                continue;
            }
            for j in col..n {
                let t = ar.mul(&factor, &w[col * n + j]);
                w[i * n + j] = ar.sub(&w[i * n + j], &t);
            }
        }
    }
    det
}
