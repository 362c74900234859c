use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed};

use super::lattice::saturated_basis;
use super::{to_rat, MultiPoly, RatVec, Rational};
use crate::error::{Error, Result};

/// Exterior k-form on an n-dimensional space with polynomial coefficients.
/// Keys are strictly increasing index tuples; zero coefficients are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtForm {
    dim: usize,
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, MultiPoly>,
}

impl ExtForm {
    pub fn zero(dim: usize, nvars: usize, degree: usize) -> Self {
        Self { dim, nvars, degree, terms: BTreeMap::new() }
    }

    /// The 0-form `p`.
    pub fn scalar(dim: usize, p: MultiPoly) -> Self {
        let mut f = Self::zero(dim, p.nvars(), 0);
        f.add_term(Vec::new(), p);
        f
    }

    /// The basis 1-form `dx_i`.
    pub fn dx(dim: usize, nvars: usize, i: usize) -> Self {
        let mut f = Self::zero(dim, nvars, 1);
        f.add_term(vec![i], MultiPoly::one(nvars));
        f
    }

    /// The constant 1-form with the given coefficients.
    pub fn from_covector(c: &[Rational], nvars: usize) -> Self {
        let mut f = Self::zero(c.len(), nvars, 1);
        for (i, ci) in c.iter().enumerate() {
            f.add_term(vec![i], MultiPoly::constant(nvars, ci.clone()));
        }
        f
    }

    /// Builds a form from index tuples in any order, sorting each with sign.
    pub fn from_terms(
        dim: usize,
        nvars: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, MultiPoly)>,
    ) -> Result<Self> {
        let mut f = Self::zero(dim, nvars, degree);
        for (mut idx, p) in terms {
            if idx.len() != degree || idx.iter().any(|&i| i >= dim) {
                return Err(Error::InvalidParameter(format!("bad index tuple {idx:?}")));
            }
            if let Some(sign) = sort_with_sign(&mut idx) {
                let p = if sign < 0 { -&p } else { p };
                f.add_term(idx, p);
            }
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: &[usize]) -> MultiPoly {
        self.terms.get(idx).cloned().unwrap_or_else(|| MultiPoly::zero(self.nvars))
    }

    fn add_term(&mut self, idx: Vec<usize>, p: MultiPoly) {
        if p.is_zero() {
            return;
        }
        match self.terms.remove(&idx) {
            Some(old) => {
                let s = &old + &p;
                if !s.is_zero() {
                    self.terms.insert(idx, s);
                }
            }
            None => {
                self.terms.insert(idx, p);
            }
        }
    }

    pub fn add(&self, other: &ExtForm) -> Result<ExtForm> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch { expected: self.degree, found: other.degree });
        }
        let mut out = self.clone();
        for (idx, p) in &other.terms {
            out.add_term(idx.clone(), p.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> ExtForm {
        self.map_coefficients(|p| -p)
    }

    pub fn scale(&self, p: &MultiPoly) -> ExtForm {
        self.map_coefficients(|c| c * p)
    }

    pub fn scale_rat(&self, c: &Rational) -> ExtForm {
        self.map_coefficients(|p| p.scale(c))
    }

    /// Applies `f` to every coefficient, dropping those that become zero.
    pub fn map_coefficients(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> ExtForm {
        let mut out = Self::zero(self.dim, self.nvars, self.degree);
        for (idx, p) in &self.terms {
            out.add_term(idx.clone(), f(p));
        }
        out
    }

    fn check_compatible(&self, other: &ExtForm) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }
}

/// Sorts `idx` in place and returns the permutation sign, or `None` when an
/// index repeats.
fn sort_with_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// Exterior product.
pub fn wedge(f: &ExtForm, g: &ExtForm) -> Result<ExtForm> {
    f.check_compatible(g)?;
    let mut out = ExtForm::zero(f.dim, f.nvars, f.degree + g.degree);
    for (a, p) in &f.terms {
        for (b, q) in &g.terms {
            let mut idx: Vec<usize> = a.iter().chain(b).copied().collect();
            if let Some(sign) = sort_with_sign(&mut idx) {
                let c = p * q;
                out.add_term(idx, if sign < 0 { -&c } else { c });
            }
        }
    }
    Ok(out)
}

/// Wedge of the constant 1-forms given by `covectors`, with `nvars` variables.
pub fn wedge_covectors(dim: usize, nvars: usize, covectors: &[RatVec]) -> Result<ExtForm> {
    let mut acc = ExtForm::scalar(dim, MultiPoly::one(nvars));
    for c in covectors {
        if c.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: c.len() });
        }
        acc = wedge(&acc, &ExtForm::from_covector(c, nvars))?;
    }
    Ok(acc)
}

/// Lattice-normalized volume form of `span(frame)`: the wedge of an integer
/// basis of `span(frame) ∩ Z^n`, oriented like `frame`. Coefficients are
/// constants in `nvars` variables.
pub fn covolume(frame: &[RatVec], dim: usize, nvars: usize) -> Result<ExtForm> {
    let raw = wedge_covectors(dim, nvars, frame)?;
    if raw.is_zero() {
        return Err(Error::DependentInput);
    }
    let basis: Vec<RatVec> = saturated_basis(frame, dim).iter().map(|b| to_rat(b)).collect();
    let unit = wedge_covectors(dim, nvars, &basis)?;
    let (idx, c) = unit.terms.iter().next().expect("lattice basis of a nonzero span");
    let ratio = raw.coefficient(idx).constant_term() / c.constant_term();
    Ok(if ratio.is_negative() { unit.neg() } else { unit })
}

/// The `q` with `f = q * covolume(frame)`.
pub fn extract_conormal_multiple(f: &ExtForm, frame: &[RatVec]) -> Result<MultiPoly> {
    if f.degree != frame.len() {
        return Err(Error::DimensionMismatch { expected: frame.len(), found: f.degree });
    }
    let unit = covolume(frame, f.dim, f.nvars)?;
    let (idx, c) = unit.terms.iter().next().expect("nonzero covolume");
    let q = f.coefficient(idx).scale(&(Rational::one() / c.constant_term()));
    let residue = f.add(&unit.scale(&q).neg())?;
    if !residue.is_zero() {
        return Err(Error::NotDecomposable(residue.to_string()));
    }
    Ok(q)
}

impl fmt::Display for ExtForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(idx, p)| {
                let d: Vec<String> = idx.iter().map(|i| format!("dx{}", i + 1)).collect();
                if d.is_empty() {
                    format!("({p})")
                } else {
                    format!("({p})*{}", d.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rvec};

    #[test]
    fn wedge_examples() {
        let dx = ExtForm::dx(2, 2, 0);
        let dy = ExtForm::dx(2, 2, 1);
        let w = wedge(&dx, &dy).unwrap();
        assert_eq!(w.terms().count(), 1);
        assert_eq!(w.coefficient(&[0, 1]), MultiPoly::one(2));
        assert!(wedge(&dx, &dx).unwrap().is_zero());
        let xdx = dx.scale(&MultiPoly::var(2, 0));
        assert_eq!(wedge(&xdx, &dy).unwrap(), w.scale(&MultiPoly::var(2, 0)));
        assert_eq!(wedge(&dy, &dx).unwrap(), w.neg());
    }

    #[test]
    fn extract_examples() {
        let f = ExtForm::from_terms(3, 3, 2, [(vec![0, 1], MultiPoly::constant(3, int(3)))]).unwrap();
        let frame = [rvec(&[1, 0, 0]), rvec(&[0, 1, 0])];
        assert_eq!(extract_conormal_multiple(&f, &frame).unwrap(), MultiPoly::constant(3, int(3)));
        let g = ExtForm::from_terms(3, 3, 2, [(vec![0, 2], MultiPoly::one(3))]).unwrap();
        assert!(matches!(extract_conormal_multiple(&g, &frame), Err(Error::NotDecomposable(_))));
        let diag = [rvec(&[1, 1])];
        let x = MultiPoly::var(2, 0);
        let h = covolume(&diag, 2, 2).unwrap().scale(&x);
        assert_eq!(extract_conormal_multiple(&h, &diag).unwrap(), x);
    }

    #[test]
    fn covolume_is_lattice_normalized_and_oriented() {
        let c = covolume(&[rvec(&[2, 2])], 2, 0).unwrap();
        assert_eq!(c, ExtForm::from_covector(&rvec(&[1, 1]), 0));
        let c = covolume(&[rvec(&[0, 1]), rvec(&[3, 0])], 2, 0).unwrap();
        assert_eq!(c.coefficient(&[0, 1]), MultiPoly::constant(0, int(-1)));
    }
}
