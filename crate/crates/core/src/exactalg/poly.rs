use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use super::{format_rational, nullspace, rref, Rational};

/// Exponent multi-index. Ordered graded-lexicographically: total degree
/// first, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with rational coefficients. Zero
/// coefficients are never stored, so structural equality is polynomial
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Exponent(vec![0; nvars]), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(Exponent(e), Rational::one());
        p
    }

    /// The linear form `x -> coeffs . x`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(Exponent(e), c.clone());
        }
        p
    }

    pub fn linear_int(coeffs: &[BigInt]) -> Self {
        let r: Vec<Rational> = coeffs.iter().cloned().map(Rational::from_integer).collect();
        Self::linear(&r)
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length must match variable count");
            p.add_term(Exponent(e), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Exponent::degree)
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.degree() == d)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Exponent(vec![0; self.nvars]))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.0[i];
            if k == 0 {
                continue;
            }
            let mut f = e.0.clone();
            f[i] -= 1;
            out.add_term(Exponent(f), c * Rational::from_integer(BigInt::from(k)));
        }
        out
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.nvars);
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(&e.0) {
                for _ in 0..k {
                    t *= xi;
                }
            }
            total += t;
        }
        total
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.0.iter()
                    .zip(x)
                    .fold(super::to_f64(c), |acc, (&k, xi)| acc * xi.powi(k as i32))
            })
            .sum()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Composition with the map sending variable `i` to `images[i]`; all
    /// images must share one variable count, which becomes the result's.
    pub fn substitute(&self, images: &[MultiPoly]) -> Self {
        assert_eq!(images.len(), self.nvars);
        let m = images.first().map_or(0, |p| p.nvars);
        let ints: Vec<(IntTerms, BigInt)> = images.iter().map(MultiPoly::integer_form).collect();
        let mut powers: Vec<Vec<IntTerms>> = ints.iter().map(|_| vec![IntTerms::from([(vec![0; m], BigInt::one())])]).collect();
        // Common denominator of every contribution.
        let mut den = BigInt::one();
        for (e, c) in &self.terms {
            let mut d = c.denom().clone();
            for (i, &k) in e.0.iter().enumerate() {
                d *= Pow::pow(&ints[i].1, k);
            }
            den = den.lcm(&d);
        }
        let mut acc = IntTerms::new();
        for (e, c) in &self.terms {
            let mut d = c.denom().clone();
            let mut t = IntTerms::from([(vec![0; m], BigInt::one())]);
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                d *= Pow::pow(&ints[i].1, k);
                while powers[i].len() <= k as usize {
                    let next = mul_int_terms(powers[i].last().unwrap(), &ints[i].0);
                    powers[i].push(next);
                }
                t = mul_int_terms(&t, &powers[i][k as usize]);
            }
            let scale = c.numer() * (&den / d);
            for (f, v) in t {
                *acc.entry(f).or_insert_with(BigInt::zero) += v * &scale;
            }
        }
        MultiPoly::from_integer_form(m, acc, &den)
    }

    /// Integer coefficients and a positive common denominator.
    fn integer_form(&self) -> (IntTerms, BigInt) {
        let den = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let t = self.terms.iter().map(|(e, c)| (e.0.clone(), c.numer() * (&den / c.denom()))).collect();
        (t, den)
    }

    fn from_integer_form(nvars: usize, t: IntTerms, den: &BigInt) -> MultiPoly {
        let terms = t
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(e, v)| (Exponent(e), Rational::new(v, den.clone())))
            .collect();
        MultiPoly { nvars, terms }
    }

    /// Embeds into a larger variable set: variable `i` becomes variable `map[i]`.
    pub fn relabel(&self, nvars: usize, map: &[usize]) -> Self {
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0; nvars];
            for (i, &k) in e.0.iter().enumerate() {
                f[map[i]] += k;
            }
            out.add_term(Exponent(f), c.clone());
        }
        out
    }

    pub fn var_name(nvars: usize, i: usize) -> String {
        if nvars <= 4 {
            ["x", "y", "z", "w"][i].to_string()
        } else {
            format!("x{i}")
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let v = Self::var_name(self.nvars, i);
                    if k == 1 { v } else { format!("{v}^{k}") }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial variable counts differ");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        assert_eq!(self.nvars, rhs.nvars, "polynomial variable counts differ");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial variable counts differ");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial variable counts differ");
        let (a, da) = self.integer_form();
        let (b, db) = rhs.integer_form();
        MultiPoly::from_integer_form(self.nvars, mul_int_terms(&a, &b), &(da * db))
    }
}

type IntTerms = BTreeMap<Vec<u32>, BigInt>;

fn mul_int_terms(a: &IntTerms, b: &IntTerms) -> IntTerms {
    let mut out = IntTerms::new();
    for (e1, c1) in a {
        for (e2, c2) in b {
            let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(BigInt::zero) += c1 * c2;
        }
    }
    out
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

/// Derivative of `p` along the vector `v`.
pub fn directional_derivative(p: &MultiPoly, v: &[Rational]) -> MultiPoly {
    assert_eq!(p.nvars, v.len(), "direction has wrong dimension");
    let mut out = MultiPoly::zero(p.nvars);
    for (i, c) in v.iter().enumerate() {
        if !c.is_zero() {
            out += &p.partial(i).scale(c);
        }
    }
    out
}

/// Canonical representative of `p` modulo the linear forms vanishing on
/// `span`: the variables at pivot positions of the reduced equations of the
/// span are eliminated in favour of the remaining ones.
pub fn reduce_mod_span(p: &MultiPoly, span: &[Rational]) -> MultiPoly {
    reduce_mod_span_rows(p, &[span.to_vec()])
}

/// As [`reduce_mod_span`], with the span given by several generators.
pub fn reduce_mod_span_rows(p: &MultiPoly, span: &[Vec<Rational>]) -> MultiPoly {
    let n = p.nvars;
    let eqs = nullspace(span, n);
    reduce_with_equations(p, &eqs)
}

/// Reduces `p` modulo the ideal generated by the given linear forms.
pub fn reduce_with_equations(p: &MultiPoly, eqs: &[Vec<Rational>]) -> MultiPoly {
    let n = p.nvars;
    if eqs.is_empty() || p.is_zero() {
        return p.clone();
    }
    let (rows, pivots) = rref(eqs, n);
    if pivots.is_empty() {
        return p.clone();
    }
    let mut images: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(n, i)).collect();
    for (row, &pv) in rows.iter().zip(&pivots) {
        let mut img = MultiPoly::zero(n);
        for (f, c) in row.iter().enumerate() {
            if f != pv && !c.is_zero() {
                img = &img - &MultiPoly::var(n, f).scale(c);
            }
        }
        images[pv] = img;
    }
    p.substitute(&images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rvec};

    fn x(n: usize) -> MultiPoly {
        MultiPoly::var(n, 0)
    }
    fn y(n: usize) -> MultiPoly {
        MultiPoly::var(n, 1)
    }
    fn z(n: usize) -> MultiPoly {
        MultiPoly::var(n, 2)
    }

    #[test]
    fn derivative_examples() {
        let p = x(2).pow(2);
        assert_eq!(directional_derivative(&p, &rvec(&[1, 0])), x(2).scale(&int(2)));
        let s = &x(2) + &y(2);
        let p = s.pow(2);
        assert_eq!(directional_derivative(&p, &rvec(&[1, 1])), s.scale(&int(4)));
        let c = MultiPoly::constant(2, int(5));
        assert!(directional_derivative(&c, &rvec(&[3, -7])).is_zero());
    }

    #[test]
    fn reduce_examples() {
        let p = &x(3) + &z(3);
        assert_eq!(reduce_mod_span(&p, &rvec(&[1, 0, 0])), x(3));
        let q = z(3).pow(2);
        assert!(reduce_mod_span_rows(&q, &[rvec(&[1, 0, 0]), rvec(&[0, 1, 0])]).is_zero());
        let d = (&x(2) - &y(2)).pow(2);
        assert!(reduce_mod_span(&d, &rvec(&[1, 1])).is_zero());
    }

    #[test]
    fn graded_order_and_display() {
        let p = &(&x(2).pow(2) + &y(2)) - &MultiPoly::constant(2, int(3));
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.to_string(), "x^2 + y - 3");
        assert!(MultiPoly::zero(2).degree().is_none());
    }
}
