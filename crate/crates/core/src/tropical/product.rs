use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;

use super::{reduce_on, WeightedCone, WeightedFan};
use crate::error::{Error, Result};
use crate::exactalg::lattice::saturated_basis;
use crate::exactalg::{det_int, dot_int_rat, primitive, rank_int, solve_combination, to_rat, IntVec, MultiPoly, RatVec, Rational};
use crate::fan::cone::echelon_basis;
use crate::fan::{Cone, ConeKey};

const MAX_ATTEMPTS: usize = 16;
const DENOMINATOR_BOUND: i64 = 1 << 16;

/// A rational linear subspace, stored by a lattice basis of its integer points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<IntVec>,
}

impl Subspace {
    pub fn from_spanning(ambient: usize, vectors: &[RatVec]) -> Result<Subspace> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch { expected: ambient, found: v.len() });
        }
        Ok(Subspace { ambient, basis: saturated_basis(vectors, ambient) })
    }

    /// Subspace with the given integer lattice basis, used as coordinates.
    pub fn from_lattice_basis(ambient: usize, basis: Vec<IntVec>) -> Result<Subspace> {
        if rank_int(&basis, ambient) != basis.len() {
            return Err(Error::DependentInput);
        }
        let r: Vec<RatVec> = basis.iter().map(|b| to_rat(b)).collect();
        if saturated_basis(&r, ambient).len() != basis.len() {
            return Err(Error::DependentInput);
        }
        Ok(Subspace { ambient, basis })
    }

    /// The diagonal of `R^n + R^n`.
    pub fn diagonal(n: usize) -> Subspace {
        let basis = (0..n)
            .map(|i| (0..2 * n).map(|j| BigInt::from((j % n == i) as i32)).collect())
            .collect();
        Subspace { ambient: 2 * n, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVec] {
        &self.basis
    }

    /// Coordinates of a vector of the subspace in the lattice basis.
    fn coordinates(&self, v: &[BigInt]) -> RatVec {
        let cols: Vec<RatVec> = self.basis.iter().map(|b| to_rat(b)).collect();
        solve_combination(&cols, &to_rat(v)).expect("vector lies in the subspace")
    }
}

fn pad(v: &[BigInt], before: usize, after: usize) -> IntVec {
    let mut out = vec![BigInt::zero(); before];
    out.extend(v.iter().cloned());
    out.extend(std::iter::repeat_n(BigInt::zero(), after));
    out
}

/// `W1 x W2` in the direct sum of the ambient spaces.
pub fn cartesian_product(a: &WeightedFan, b: &WeightedFan) -> Result<WeightedFan> {
    let (n1, n2) = (a.ambient(), b.ambient());
    let n = n1 + n2;
    let map1: Vec<usize> = (0..n1).collect();
    let map2: Vec<usize> = (n1..n).collect();
    let mut cones = Vec::with_capacity(a.cones().len() * b.cones().len());
    for x in a.cones() {
        for y in b.cones() {
            let rays: Vec<IntVec> = x
                .cone
                .rays()
                .iter()
                .map(|r| pad(r, 0, n2))
                .chain(y.cone.rays().iter().map(|r| pad(r, n1, 0)))
                .collect();
            let lin: Vec<IntVec> = x
                .cone
                .lineality()
                .iter()
                .map(|r| pad(r, 0, n2))
                .chain(y.cone.lineality().iter().map(|r| pad(r, n1, 0)))
                .collect();
            let frame: Vec<IntVec> =
                x.frame.iter().map(|f| pad(f, 0, n2)).chain(y.frame.iter().map(|f| pad(f, n1, 0))).collect();
            let weight = &x.weight.relabel(n, &map1) * &y.weight.relabel(n, &map2);
            cones.push(WeightedCone::new(Cone::from_generators(n, &rays, &lin), frame, weight));
        }
    }
    let (k, d) = (a.codim() + b.codim(), a.degree() + b.degree());
    if a.is_face_compatible() && b.is_face_compatible() {
        WeightedFan::from_compatible(n, k, d, cones)
    } else {
        WeightedFan::new(n, k, d, cones)
    }
}

fn random_epsilon<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RatVec {
    (0..n)
        .map(|_| {
            let q = rng.gen_range(1..=DENOMINATOR_BOUND);
            let p = rng.gen_range(-DENOMINATOR_BOUND..=DENOMINATOR_BOUND);
            Rational::new(p.into(), q.into())
        })
        .collect()
}

/// Stable intersection, retrying random displacements until one is generic.
pub fn stable_intersection<R: Rng + ?Sized>(a: &WeightedFan, b: &WeightedFan, rng: &mut R) -> Result<WeightedFan> {
    let mut last = String::new();
    for _ in 0..MAX_ATTEMPTS {
        let eps = random_epsilon(a.ambient(), rng);
        match stable_intersection_with_epsilon(a, b, &eps) {
            Err(Error::GenericityFailure { diagnostic, .. }) => last = diagnostic,
            other => return other,
        }
    }
    Err(Error::GenericityFailure { attempts: MAX_ATTEMPTS, diagnostic: last })
}

fn non_generic(diagnostic: String) -> Error {
    Error::GenericityFailure { attempts: 1, diagnostic }
}

/// Stable intersection computed with the given displacement of `a`
/// relative to `b`; fails if the displacement is not generic.
pub fn stable_intersection_with_epsilon(a: &WeightedFan, b: &WeightedFan, eps: &[Rational]) -> Result<WeightedFan> {
    let n = a.ambient();
    if b.ambient() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.ambient() });
    }
    if eps.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: eps.len() });
    }
    let (k, l) = (a.codim(), b.codim());
    if k + l > n {
        return Err(Error::GradingMismatch(format!("codimensions {k} + {l} exceed dimension {n}")));
    }
    let target = n - k - l;
    let mut acc: BTreeMap<ConeKey, WeightedCone> = BTreeMap::new();
    for s in a.cones() {
        for r in b.cones() {
            let mut both = s.frame.clone();
            both.extend(r.frame.iter().cloned());
            if rank_int(&both, n) < k + l {
                let mut gens = s.cone.span_generators();
                gens.extend(r.cone.span_generators());
                let rk = rank_int(&gens, n);
                let mut with = gens.clone();
                with.push(primitive(eps));
                if rank_int(&with, n) == rk {
                    return Err(non_generic(format!("displacement lies in the span of {} and {}", s.cone, r.cone)));
                }
                continue;
            }
            let tau = s.cone.intersect(&r.cone);
            if tau.dim() != target {
                continue;
            }
            let mut rays: Vec<IntVec> = r.cone.rays().to_vec();
            rays.extend(s.cone.rays().iter().map(|v| v.iter().map(|x| -x).collect()));
            let mut lin = r.cone.lineality().to_vec();
            lin.extend(s.cone.lineality().iter().cloned());
            let diff = Cone::from_generators(n, &rays, &lin);
            let vals: Vec<Rational> = diff.facets().iter().map(|f| dot_int_rat(f, eps)).collect();
            if vals.iter().any(Zero::is_zero) {
                return Err(non_generic(format!("displacement on a wall of {} - {}", r.cone, s.cone)));
            }
            if vals.iter().any(Signed::is_negative) {
                continue;
            }
            let (_, pivots) = echelon_basis(tau.conormal(), n);
            let minor = |rows: &[IntVec]| -> BigInt {
                let m: Vec<IntVec> = rows.iter().map(|v| pivots.iter().map(|&c| v[c].clone()).collect()).collect();
                det_int(&m).abs()
            };
            let index = minor(&both) / minor(tau.conormal());
            let w = (&s.weight * &r.weight).scale(&Rational::from_integer(index));
            let w = reduce_on(&tau, &w);
            match acc.get_mut(&tau.key()) {
                Some(e) => e.weight = &e.weight + &w,
                None => {
                    let frame = tau.conormal().to_vec();
                    acc.insert(tau.key(), WeightedCone { cone: tau, frame, weight: w });
                }
            }
        }
    }
    let cones = acc.into_values().filter(|wc| !wc.weight.is_zero()).collect();
    let compatible = a.is_face_compatible() && b.is_face_compatible();
    Ok(WeightedFan::empty(n, k + l, a.degree() + b.degree()).with_cones(cones, compatible))
}

/// The restriction to a subspace, in the subspace's lattice coordinates.
pub fn restrict<R: Rng + ?Sized>(w: &WeightedFan, l: &Subspace, rng: &mut R) -> Result<WeightedFan> {
    let n = w.ambient();
    if l.ambient() != n {
        return Err(Error::DimensionMismatch { expected: n, found: l.ambient() });
    }
    let m = l.dim();
    let lcone = Cone::from_generators(n, &[], l.basis());
    let frame = lcone.conormal().to_vec();
    let lfan = WeightedFan::from_compatible(n, n - m, 0, vec![WeightedCone::new(lcone, frame, MultiPoly::one(n))])?;
    let s = stable_intersection(w, &lfan, rng)?;
    let images: Vec<MultiPoly> = (0..n)
        .map(|j| {
            let coeffs: RatVec = l.basis().iter().map(|b| Rational::from_integer(b[j].clone())).collect();
            MultiPoly::linear(&coeffs)
        })
        .collect();
    let mut cones = Vec::with_capacity(s.cones().len());
    for wc in s.cones() {
        let rays: Vec<IntVec> = wc.cone.rays().iter().map(|r| primitive(&l.coordinates(r))).collect();
        let lin: Vec<IntVec> = wc.cone.lineality().iter().map(|r| primitive(&l.coordinates(r))).collect();
        let cone = Cone::from_generators(m, &rays, &lin);
        let frame = cone.conormal().to_vec();
        let weight = if n == 0 { wc.weight.clone() } else { wc.weight.substitute(&images) };
        let weight = if m == 0 { MultiPoly::constant(0, weight.constant_term()) } else { weight };
        cones.push(WeightedCone::new(cone, frame, weight));
    }
    let out = WeightedFan::new(m, w.codim(), w.degree(), cones)?;
    Ok(if s.is_face_compatible() { out.with_cones(out.cones().to_vec(), true).tidy() } else { out.tidy() })
}
