//! Exact scalars, vectors and matrices over the rationals, plus the
//! multivariate polynomials and exterior forms built on top of them.

pub mod form;
pub mod lattice;
pub mod poly;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use form::{covolume, extract_conormal_multiple, wedge, ExtForm};
pub use poly::{directional_derivative, reduce_mod_span, Exponent, MultiPoly};

/// Exact rational scalar, always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;
pub type RatVec = Vec<Rational>;
/// Row-major rational matrix.
pub type RatMat = Vec<RatVec>;
/// Integer vector; rays, facet normals and lattice bases use this.
pub type IntVec = Vec<BigInt>;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rvec(xs: &[i64]) -> RatVec {
    xs.iter().map(|&x| int(x)).collect()
}

pub fn ivec(xs: &[i64]) -> IntVec {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn to_rat(v: &[BigInt]) -> RatVec {
    v.iter().cloned().map(Rational::from_integer).collect()
}

/// Formats as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => q.to_f64().unwrap_or(f64::NAN),
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int_rat(a: &[BigInt], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + y * x)
}

pub fn add_vec(a: &[Rational], b: &[Rational]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Rational], b: &[Rational]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(c: &Rational, a: &[Rational]) -> RatVec {
    a.iter().map(|x| c * x).collect()
}

pub fn is_zero_vec(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Scales a rational vector to the primitive integer vector pointing the same
/// way. The zero vector maps to the zero vector.
pub fn primitive(v: &[Rational]) -> IntVec {
    let l = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: IntVec = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    primitive_int(ints)
}

pub fn primitive_int(mut v: IntVec) -> IntVec {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

/// Exact determinant by fraction-free elimination.
pub fn det(m: &RatMat) -> Result<Rational> {
    let n = m.len();
    for row in m {
        if row.len() != n {
            return Err(Error::NotSquare { rows: n, cols: row.len() });
        }
    }
    let mut a = m.clone();
    let mut sign = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != col {
            a.swap(p, col);
            sign = -sign;
        }
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    Ok((0..n).fold(sign, |acc, i| acc * &a[i][i]))
}

pub fn det_int(m: &[IntVec]) -> BigInt {
    // Bareiss elimination keeps every intermediate integral.
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<IntVec> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[RatVec], ncols: usize) -> (RatMat, Vec<usize>) {
    let mut a: Vec<IntVec> = rows.iter().map(|r| primitive(r)).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let pr = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                let next: IntVec = row.iter().zip(&pr).map(|(x, y)| x * &pr[c] - &f * y).collect();
                *row = primitive_int(next);
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    let out = a
        .iter()
        .zip(&pivots)
        .map(|(row, &c)| row.iter().map(|x| Rational::new(x.clone(), row[c].clone())).collect())
        .collect();
    (out, pivots)
}

pub fn rank(rows: &[RatVec], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

pub fn rank_int(rows: &[IntVec], ncols: usize) -> usize {
    let r: Vec<RatVec> = rows.iter().map(|v| to_rat(v)).collect();
    rank(&r, ncols)
}

/// Basis of `{x : row · x = 0 for every row}`.
pub fn nullspace(rows: &[RatVec], ncols: usize) -> RatMat {
    let (r, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Solves `sum_i y_i * cols[i] = x` for `y`, if a solution exists.
pub fn solve_combination(cols: &[RatVec], x: &[Rational]) -> Option<RatVec> {
    let n = x.len();
    let k = cols.len();
    // Augmented system, one row per coordinate.
    let rows: RatMat = (0..n)
        .map(|i| {
            let mut r: RatVec = cols.iter().map(|c| c[i].clone()).collect();
            r.push(x[i].clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&rows, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut y = vec![Rational::zero(); k];
    for (row, &p) in r.iter().zip(&pivots) {
        y[p] = row[k].clone();
    }
    Some(y)
}

/// Unnormalized Gram-Schmidt: pairwise orthogonal `w_i` with
/// `span(w_1..w_i) = span(v_1..v_i)` and `<w_i, v_i> > 0`, entries rational.
pub fn gram_schmidt_unnormalized(basis: &[RatVec]) -> Result<Vec<RatVec>> {
    let mut out: Vec<RatVec> = Vec::with_capacity(basis.len());
    let mut norms: Vec<Rational> = Vec::with_capacity(basis.len());
    for v in basis {
        if let Some(w0) = out.first() {
            if w0.len() != v.len() {
                return Err(Error::DimensionMismatch { expected: w0.len(), found: v.len() });
            }
        }
        let mut w = v.clone();
        for (u, nu) in out.iter().zip(&norms) {
            let c = dot(v, u) / nu;
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi -= &c * ui;
            }
        }
        let nw = dot(&w, &w);
        if nw.is_zero() {
            return Err(Error::DependentInput);
        }
        out.push(w);
        norms.push(nw);
    }
    Ok(out)
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

pub fn identity(n: usize) -> RatMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

/// Serde adapters for rationals as `"p/q"` strings. Integers given as JSON
/// numbers are accepted on input.
pub mod serde_rat {
    use super::{format_rational, parse_rational, Rational};
    use serde::de::{self, Deserializer};
    use serde::{Deserialize, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Str(String),
        Int(i64),
    }

    pub fn parse_raw<E: de::Error>(raw: RawRat) -> Result<Rational, E> {
        match raw.0 {
            Raw::Str(s) => parse_rational(&s).map_err(E::custom),
            Raw::Int(i) => Ok(super::int(i)),
        }
    }

    #[derive(Deserialize)]
    #[serde(transparent)]
    pub struct RawRat(Raw);

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        parse_raw(RawRat::deserialize(d)?)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&format_rational(q))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<RawRat>::deserialize(d)?.into_iter().map(parse_raw).collect()
        }
    }

    pub mod mat {
        use super::*;

        #[derive(serde::Serialize, serde::Deserialize)]
        #[serde(transparent)]
        struct Row(#[serde(with = "super::vec")] Vec<Rational>);

        pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
            use serde::Serialize;
            let rows: Vec<Row> = m.iter().map(|r| Row(r.clone())).collect();
            rows.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
            Ok(Vec::<Row>::deserialize(d)?.into_iter().map(|r| r.0).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_examples() {
        assert_eq!(det(&vec![rvec(&[1, 0]), rvec(&[0, 1])]).unwrap(), int(1));
        assert_eq!(det(&vec![rvec(&[0, 1]), rvec(&[1, 0])]).unwrap(), int(-1));
        assert_eq!(det(&vec![rvec(&[2, 1]), rvec(&[1, 1])]).unwrap(), int(1));
        assert_eq!(
            det(&vec![rvec(&[1, 2])]),
            Err(Error::NotSquare { rows: 1, cols: 2 })
        );
        assert_eq!(det_int(&[ivec(&[2, 1]), ivec(&[1, 1])]), BigInt::from(1));
        assert_eq!(det_int(&[ivec(&[0, 1, 0]), ivec(&[1, 0, 0]), ivec(&[0, 0, 3])]), BigInt::from(-3));
    }

    #[test]
    fn gram_schmidt_examples() {
        let e = gram_schmidt_unnormalized(&[rvec(&[1, 0]), rvec(&[0, 1])]).unwrap();
        assert_eq!(e, vec![rvec(&[1, 0]), rvec(&[0, 1])]);
        let w = gram_schmidt_unnormalized(&[rvec(&[1, 0]), rvec(&[1, 1])]).unwrap();
        assert_eq!(w, vec![rvec(&[1, 0]), rvec(&[0, 1])]);
        let w = gram_schmidt_unnormalized(&[rvec(&[1, 1]), rvec(&[1, 0])]).unwrap();
        assert_eq!(w, vec![rvec(&[1, 1]), vec![rat(1, 2), rat(-1, 2)]]);
        assert_eq!(
            gram_schmidt_unnormalized(&[rvec(&[1, 1]), rvec(&[2, 2])]),
            Err(Error::DependentInput)
        );
    }

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&rat(6, -4)), "-3/2");
        assert_eq!(format_rational(&int(7)), "7");
        assert_eq!(parse_rational(" -3/2 ").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn primitive_scaling() {
        assert_eq!(primitive(&[rat(1, 2), rat(-1, 3)]), ivec(&[3, -2]));
        assert_eq!(primitive(&[int(0), int(0)]), ivec(&[0, 0]));
        assert_eq!(primitive(&[int(4), int(6)]), ivec(&[2, 3]));
    }

    #[test]
    fn nullspace_and_solve() {
        let ns = nullspace(&[rvec(&[1, 1, 0])], 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(dot(v, &rvec(&[1, 1, 0])).is_zero());
        }
        let y = solve_combination(&[rvec(&[1, 1]), rvec(&[1, -1])], &rvec(&[3, 1])).unwrap();
        assert_eq!(y, rvec(&[2, 1]));
        assert!(solve_combination(&[rvec(&[1, 1])], &rvec(&[1, 0])).is_none());
    }
}
