//! Integer lattice bookkeeping: integer kernels, Hermite normal forms and
//! saturated lattice bases of rational subspaces.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{nullspace, primitive, IntVec, RatVec};

/// Combines rows `r` and `i` so that `rows[r][c]` becomes `gcd` and
/// `rows[i][c]` becomes zero, by a unimodular 2x2 transformation.
fn gcd_combine(rows: &mut [IntVec], r: usize, i: usize, c: usize) {
    let a = rows[r][c].clone();
    let b = rows[i][c].clone();
    if b.is_zero() {
        return;
    }
    let e = a.extended_gcd(&b);
    let (g, s, t) = (e.gcd, e.x, e.y);
    let ap = &a / &g;
    let bp = &b / &g;
    let width = rows[r].len();
    for j in 0..width {
        let x = rows[r][j].clone();
        let y = rows[i][j].clone();
        rows[r][j] = &s * &x + &t * &y;
        rows[i][j] = &ap * &y - &bp * &x;
    }
}

/// Brings the first `cols` columns of `rows` into integer row echelon form by
/// unimodular row operations; returns pivot columns in order.
fn echelon(rows: &mut [IntVec], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        for i in r..rows.len() {
            if !rows[i][c].is_zero() {
                if rows[r][c].is_zero() {
                    rows.swap(r, i);
                } else if i != r {
                    gcd_combine(rows, r, i, c);
                }
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Lattice basis of `{x in Z^n : a . x = 0 for every row a}`.
pub fn integer_kernel(rows: &[IntVec], n: usize) -> Vec<IntVec> {
    let m = rows.len();
    // Work on [A^T | I]; rows whose A^T part vanishes carry kernel vectors.
    let mut aug: Vec<IntVec> = (0..n)
        .map(|j| {
            let mut v: IntVec = rows.iter().map(|a| a[j].clone()).collect();
            v.extend((0..n).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            v
        })
        .collect();
    let pivots = echelon(&mut aug, m);
    aug.into_iter()
        .skip(pivots.len())
        .map(|row| row[m..].to_vec())
        .collect()
}

/// Row Hermite normal form of the lattice spanned by linearly independent
/// integer rows: positive pivots, entries above each pivot reduced into
/// `[0, pivot)`. Two bases of one lattice give the same output.
pub fn hnf(basis: &[IntVec]) -> Vec<IntVec> {
    if basis.is_empty() {
        return Vec::new();
    }
    let n = basis[0].len();
    let mut rows: Vec<IntVec> = basis.to_vec();
    let pivots = echelon(&mut rows, n);
    rows.truncate(pivots.len());
    for (r, &c) in pivots.iter().enumerate() {
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for above in 0..r {
            let q = rows[above][c].div_floor(&rows[r][c]);
            if !q.is_zero() {
                let sub: IntVec = rows[r].iter().map(|x| x * &q).collect();
                for (x, s) in rows[above].iter_mut().zip(sub) {
                    *x -= s;
                }
            }
        }
    }
    rows
}

/// HNF lattice basis of `span(vectors) ∩ Z^n`.
pub fn saturated_basis(vectors: &[RatVec], n: usize) -> Vec<IntVec> {
    let orth: Vec<IntVec> = nullspace(vectors, n).iter().map(|v| primitive(v)).collect();
    hnf(&integer_kernel(&orth, n))
}

/// HNF lattice basis of the integer covectors vanishing on `span(vectors)`.
pub fn conormal_lattice(vectors: &[IntVec], n: usize) -> Vec<IntVec> {
    hnf(&integer_kernel(vectors, n))
}

/// Some `c` with `gamma . c = 1`, for primitive `gamma`.
pub fn unimodular_complement(gamma: &[BigInt]) -> Option<IntVec> {
    let n = gamma.len();
    let mut acc = BigInt::zero();
    let mut coeffs: IntVec = vec![BigInt::zero(); n];
    // Running extended gcd over the coordinates.
    let mut first = true;
    for (i, g) in gamma.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        if first {
            acc = g.clone();
            coeffs[i] = BigInt::one();
            first = false;
            continue;
        }
        let e = acc.extended_gcd(g);
        for c in coeffs.iter_mut() {
            *c *= &e.x;
        }
        coeffs[i] = e.y.clone();
        acc = e.gcd;
    }
    if acc.is_negative() {
        acc = -acc;
        for c in coeffs.iter_mut() {
            *c = -c.clone();
        }
    }
    acc.is_one().then_some(coeffs)
}
