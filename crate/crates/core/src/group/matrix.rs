//! Dense square matrices over a truncated ring, stored row-major.

use crate::residue::{RingElem, TruncatedRing};

pub fn identity(r: &TruncatedRing, n: usize) -> Vec<RingElem> {
    let mut out = vec![r.zero(); n * n];
    for i in 0..n {
        out[i * n + i] = r.one();
    }
    out
}

pub fn mul(r: &TruncatedRing, n: usize, a: &[RingElem], b: &[RingElem]) -> Vec<RingElem> {
    let mut out = vec![r.zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == r.zero() {
                continue;
            }
            for j in 0..n {
                out[i * n + j] = r.add(out[i * n + j], r.mul(x, b[k * n + j]));
            }
        }
    }
    out
}

fn minor(n: usize, a: &[RingElem], row: usize, col: usize) -> Vec<RingElem> {
    let mut out = Vec::with_capacity((n - 1) * (n - 1));
    for i in (0..n).filter(|&i| i != row) {
        for j in (0..n).filter(|&j| j != col) {
            out.push(a[i * n + j]);
        }
    }
    out
}

pub fn det(r: &TruncatedRing, n: usize, a: &[RingElem]) -> RingElem {
    match n {
        0 => r.one(),
        1 => a[0],
        2 => r.sub(r.mul(a[0], a[3]), r.mul(a[1], a[2])),
        _ => {
            let mut acc = r.zero();
            for j in 0..n {
                let term = r.mul(a[j], det(r, n - 1, &minor(n, a, 0, j)));
                acc = if j % 2 == 0 {
                    r.add(acc, term)
                } else {
                    r.sub(acc, term)
                };
            }
            acc
        }
    }
}

/// Adjugate: `adj(a)·a = det(a)·1`.
pub fn adjugate(r: &TruncatedRing, n: usize, a: &[RingElem]) -> Vec<RingElem> {
    if n == 1 {
        return vec![r.one()];
    }
    let mut out = vec![r.zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            let c = det(r, n - 1, &minor(n, a, i, j));
            out[j * n + i] = if (i + j) % 2 == 0 { c } else { r.neg(c) };
        }
    }
    out
}

pub fn scale(r: &TruncatedRing, a: &[RingElem], s: RingElem) -> Vec<RingElem> {
    a.iter().map(|&x| r.mul(x, s)).collect()
}

/// Smallest valuation among the entries; `None` when every entry is zero.
pub fn min_valuation(r: &TruncatedRing, a: &[RingElem]) -> Option<u32> {
    a.iter().filter_map(|&x| r.valuation(x)).min()
}
