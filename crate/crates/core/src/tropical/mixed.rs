use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{corner_locus, WeightedFan};
use crate::cpl::{as_codim0_cycle, ConewisePoly};
use crate::error::{Error, Result};
use crate::exactalg::{det_int, dot_int, to_f64, IntVec, MultiPoly, Rational};
use crate::fan::simplicial_rays;

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * BigInt::from(k))
}

/// Scalar weight of a zero-dimensional weighted fan.
pub fn point_weight(w: &WeightedFan) -> Result<Rational> {
    if w.is_empty() {
        return Ok(Rational::zero());
    }
    if w.codim() != w.ambient() || w.degree() != 0 {
        return Err(Error::GradingMismatch(format!(
            "point weight needs bidegree ({}, 0), found ({}, {})",
            w.ambient(),
            w.codim(),
            w.degree()
        )));
    }
    Ok(w.cones().iter().fold(Rational::zero(), |acc, wc| acc + wc.weight.constant_term()))
}

/// `delta^d / d!` applied to a conewise polynomial of degree `d`.
pub fn iso_i(f: &ConewisePoly) -> Result<WeightedFan> {
    let mut w = as_codim0_cycle(f)?;
    let d = w.degree();
    for _ in 0..d {
        w = corner_locus(&w)?;
    }
    Ok(w.scale(&Rational::new(BigInt::from(1), factorial(d))))
}

/// The point weight of `delta^n / n!` of a degree-`n` conewise polynomial.
pub fn mixed_volume_from_product(f: &ConewisePoly) -> Result<Rational> {
    let n = f.ambient() as u32;
    if !f.is_homogeneous_of(n) {
        return Err(Error::GradingMismatch(format!("expected homogeneous pieces of degree {n}")));
    }
    point_weight(&iso_i(f)?)
}

fn check_degree(f: &ConewisePoly) -> Result<()> {
    let n = f.ambient() as u32;
    if !f.is_homogeneous_of(n) {
        return Err(Error::GradingMismatch(format!("expected homogeneous pieces of degree {n}")));
    }
    Ok(())
}

/// Flattened tensor of `n`-th partial derivatives of a homogeneous degree-`n`
/// polynomial; entry `i_1 .. i_n` sits at base-`n` position `i_1 ... i_n`.
fn derivative_tensor(p: &MultiPoly, n: usize) -> Vec<Rational> {
    let mut t = vec![Rational::zero(); n.pow(n as u32)];
    for (e, c) in p.terms() {
        let weight = e.0.iter().fold(BigInt::one(), |acc, &k| acc * factorial(k));
        let v = c * Rational::from_integer(weight);
        for (pos, slot) in t.iter_mut().enumerate() {
            let mut counts = vec![0u32; n];
            let mut q = pos;
            for _ in 0..n {
                counts[q % n] += 1;
                q /= n;
            }
            if counts == e.0 {
                *slot = v.clone();
            }
        }
    }
    t
}

fn contract<T: Clone + Zero>(t: &[T], vs: &[Vec<T>], mul: impl Fn(&T, &T) -> T) -> T {
    let mut cur = t.to_vec();
    for v in vs {
        let n = v.len();
        cur = cur
            .chunks(n)
            .map(|c| c.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + mul(a, b)))
            .collect();
    }
    cur.into_iter().next().unwrap_or_else(T::zero)
}

/// Integer vector times `num / den`, kept unreduced.
#[derive(Clone)]
struct Scaled {
    ints: Vec<BigInt>,
    num: BigInt,
    den: BigInt,
}

impl Scaled {
    fn add(self, other: Scaled) -> Scaled {
        let a = &self.num * &other.den;
        let b = &other.num * &self.den;
        let ints = self.ints.iter().zip(&other.ints).map(|(x, y)| x * &a + y * &b).collect();
        Scaled { ints, num: BigInt::one(), den: self.den * other.den }
    }
}

/// `v` minus its projection onto the span of the pairwise orthogonal integer
/// vectors `basis` (given with squared norms), as a primitive integer vector
/// `u` with the projection equal to `u * num / den`.
fn project_out(v: &IntVec, basis: &[(IntVec, BigInt)]) -> (IntVec, BigInt, BigInt) {
    let l = basis.iter().fold(BigInt::one(), |acc, (_, nu)| acc.lcm(nu));
    let mut w: IntVec = v.iter().map(|x| x * &l).collect();
    for (u, nu) in basis {
        let c = dot_int(v, u) * (&l / nu);
        if c.is_zero() {
            continue;
        }
        for (wi, ui) in w.iter_mut().zip(u) {
            *wi -= &c * ui;
        }
    }
    let g = w.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    assert!(!g.is_zero(), "independent rays");
    let w = w.into_iter().map(|x| x / &g).collect();
    (w, g, l)
}

/// Sum over orderings of `rays` of the tensor contracted with the
/// orthogonalized rays. The `k`-th orthogonalized vector depends only on the
/// set of rays before it, so orderings are accumulated over subsets.
fn ordered_contraction_sum(t: &[BigInt], rays: &[IntVec]) -> Rational {
    let n = rays.len();
    let full = (1usize << n) - 1;
    let mut bases: Vec<Vec<(IntVec, BigInt)>> = vec![Vec::new(); 1 << n];
    let mut partial: Vec<Option<Scaled>> = vec![None; 1 << n];
    partial[0] = Some(Scaled { ints: t.to_vec(), num: BigInt::one(), den: BigInt::one() });
    for mask in 0..full {
        if mask != 0 {
            let low = mask.trailing_zeros() as usize;
            let mut b = bases[mask & (mask - 1)].clone();
            let (w, _, _) = project_out(&rays[low], &b);
            let nw = dot_int(&w, &w);
            b.push((w, nw));
            bases[mask] = b;
        }
        let Some(g) = partial[mask].take() else { continue };
        for i in (0..n).filter(|i| mask & (1 << i) == 0) {
            let (u, num, den) = project_out(&rays[i], &bases[mask]);
            let ints: Vec<BigInt> = g
                .ints
                .chunks(n)
                .map(|ch| ch.iter().zip(&u).filter(|(_, b)| !b.is_zero()).fold(BigInt::zero(), |acc, (a, b)| acc + a * b))
                .collect();
            let next = Scaled { ints, num: &g.num * num, den: &g.den * den };
            let slot = &mut partial[mask | (1 << i)];
            *slot = Some(match slot.take() {
                Some(old) => old.add(next),
                None => next,
            });
        }
    }
    match partial[full].take() {
        Some(s) => Rational::new(s.num * &s.ints[0], s.den),
        None => Rational::zero(),
    }
}

/// Sum over simplicial cones and orderings of their rays of the mixed
/// derivative along the orthogonalized rays, in exact arithmetic.
pub fn formula_star(f: &ConewisePoly) -> Result<Rational> {
    check_degree(f)?;
    let n = f.ambient();
    let tensors: Vec<Option<(Vec<BigInt>, BigInt)>> = f
        .pieces()
        .iter()
        .map(|p| {
            if p.is_zero() {
                return None;
            }
            let t = derivative_tensor(p, n);
            let l = t.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints = t.iter().map(|x| x.numer() * (&l / x.denom())).collect();
            Some((ints, l))
        })
        .collect();
    let mut total = Rational::zero();
    for (parent, rays) in simplicial_rays(f.fan()) {
        let Some((t, l)) = &tensors[parent] else { continue };
        let det = det_int(&rays).abs() * l;
        total += ordered_contraction_sum(t, &rays) / Rational::from_integer(det);
    }
    Ok(total / Rational::from_integer(factorial(n as u32)))
}

fn gram_schmidt_unit(vs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for u in &out {
            let c: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi -= c * ui;
            }
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        out.push(w.into_iter().map(|x| x / norm).collect());
    }
    out
}

/// Floating-point evaluation of the same sum with unit orthogonal vectors.
pub fn formula_star_float(f: &ConewisePoly) -> Result<f64> {
    check_degree(f)?;
    let n = f.ambient();
    let tensors: Vec<Vec<f64>> =
        f.pieces().iter().map(|p| derivative_tensor(p, n).iter().map(to_f64).collect()).collect();
    let mut total = 0.0;
    for (parent, rays) in simplicial_rays(f.fan()) {
        let rays: Vec<Vec<f64>> = rays.iter().map(|r| r.iter().map(|x| to_f64(&Rational::from_integer(x.clone()))).collect()).collect();
        for perm in (0..n).permutations(n) {
            let ordered: Vec<Vec<f64>> = perm.iter().map(|&i| rays[i].clone()).collect();
            total += contract(&tensors[parent], &gram_schmidt_unit(&ordered), |a, b| a * b);
        }
    }
    Ok(total / (1..=n).map(|k| k as f64).product::<f64>())
}
