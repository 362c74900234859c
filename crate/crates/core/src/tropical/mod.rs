//! Weighted fans with polynomial weights: normal forms, sums, balancing,
//! the corner-locus differential, products, restriction and the mixed
//! volume read off from a product of support functions.

mod delta;
mod mixed;
mod product;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub use delta::{corner_locus, is_balanced, BalanceReport, BalanceViolation};
pub use mixed::{formula_star, formula_star_float, iso_i, mixed_volume_from_product, point_weight};
pub use product::{
    cartesian_product, restrict, stable_intersection, stable_intersection_with_epsilon, Subspace,
};

use crate::error::{Error, Result};
use crate::exactalg::poly::reduce_with_equations;
use crate::exactalg::{det_int, dot_int, rank_int, to_rat, IntVec, MultiPoly, RatVec, Rational};
use crate::fan::cone::echelon_basis;
use crate::fan::{Cone, ConeKey};

/// A cone of codimension `k` with a coorienting frame of `k` covectors and
/// a scalar weight `q`; the form weight is `q` times the lattice covolume
/// form of the frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedCone {
    pub cone: Cone,
    pub frame: Vec<IntVec>,
    pub weight: MultiPoly,
}

impl WeightedCone {
    pub fn new(cone: Cone, frame: Vec<IntVec>, weight: MultiPoly) -> WeightedCone {
        WeightedCone { cone, frame, weight }
    }

    /// Same form expressed against the cone's canonical conormal basis,
    /// with the weight reduced modulo the span.
    pub fn canonical(&self) -> Result<WeightedCone> {
        let k = self.cone.codim();
        let n = self.cone.ambient();
        if self.frame.len() != k {
            return Err(Error::CountMismatch { expected: k, found: self.frame.len() });
        }
        if let Some(f) = self.frame.iter().find(|f| f.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: f.len() });
        }
        let gens = self.cone.span_generators();
        if self.frame.iter().any(|f| gens.iter().any(|g| !dot_int(f, g).is_zero())) {
            return Err(Error::InvalidParameter(format!("frame does not vanish on {}", self.cone)));
        }
        if rank_int(&self.frame, n) != k {
            return Err(Error::DependentInput);
        }
        let conormal = self.cone.conormal().to_vec();
        let sign = orientation(&self.frame, &conormal);
        let w = if sign < 0 { -&self.weight } else { self.weight.clone() };
        let weight = reduce_on(&self.cone, &w);
        Ok(WeightedCone { cone: self.cone.clone(), frame: conormal, weight })
    }
}

/// `+1` or `-1` according as two bases of one `k`-dimensional space of
/// covectors induce the same orientation.
pub(crate) fn orientation(frame: &[IntVec], reference: &[IntVec]) -> i32 {
    if reference.is_empty() {
        return 1;
    }
    let n = reference[0].len();
    let (_, pivots) = echelon_basis(reference, n);
    let minor = |rows: &[IntVec]| -> BigInt {
        let m: Vec<IntVec> = rows.iter().map(|r| pivots.iter().map(|&c| r[c].clone()).collect()).collect();
        det_int(&m)
    };
    let a = minor(frame);
    let b = minor(reference);
    debug_assert!(!a.is_zero() && !b.is_zero());
    if a.is_negative() == b.is_negative() { 1 } else { -1 }
}

/// Canonical representative of `q` as a function on the span of `cone`.
pub(crate) fn reduce_on(cone: &Cone, q: &MultiPoly) -> MultiPoly {
    if cone.conormal().is_empty() || q.is_zero() {
        return q.clone();
    }
    let eqs: Vec<RatVec> = cone.conormal().iter().map(|v| to_rat(v)).collect();
    reduce_with_equations(q, &eqs)
}

/// Element of bidegree `(codim, degree)`: a finite list of weighted cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedFan {
    ambient: usize,
    codim: usize,
    degree: u32,
    cones: Vec<WeightedCone>,
    face_compatible: bool,
}

impl WeightedFan {
    /// Validates gradings and canonicalizes each cone; cones may overlap.
    pub fn new(ambient: usize, codim: usize, degree: u32, cones: Vec<WeightedCone>) -> Result<WeightedFan> {
        let cones = Self::check(ambient, codim, degree, cones)?;
        Ok(WeightedFan { ambient, codim, degree, cones, face_compatible: false })
    }

    /// As [`WeightedFan::new`], for cones known to meet along common faces.
    pub(crate) fn from_compatible(
        ambient: usize,
        codim: usize,
        degree: u32,
        cones: Vec<WeightedCone>,
    ) -> Result<WeightedFan> {
        let cones = Self::check(ambient, codim, degree, cones)?;
        Ok(WeightedFan { ambient, codim, degree, cones, face_compatible: true }.tidy())
    }

    fn check(ambient: usize, codim: usize, degree: u32, cones: Vec<WeightedCone>) -> Result<Vec<WeightedCone>> {
        if codim > ambient {
            return Err(Error::GradingMismatch(format!("codimension {codim} exceeds dimension {ambient}")));
        }
        cones
            .into_iter()
            .map(|wc| {
                if wc.cone.ambient() != ambient {
                    return Err(Error::DimensionMismatch { expected: ambient, found: wc.cone.ambient() });
                }
                if wc.weight.nvars() != ambient {
                    return Err(Error::DimensionMismatch { expected: ambient, found: wc.weight.nvars() });
                }
                if wc.cone.codim() != codim {
                    return Err(Error::GradingMismatch(format!(
                        "cone {} has codimension {}, expected {codim}",
                        wc.cone,
                        wc.cone.codim()
                    )));
                }
                if !wc.weight.is_homogeneous_of(degree) {
                    return Err(Error::GradingMismatch(format!(
                        "weight {} is not homogeneous of degree {degree}",
                        wc.weight
                    )));
                }
                wc.canonical()
            })
            .collect()
    }

    pub fn empty(ambient: usize, codim: usize, degree: u32) -> WeightedFan {
        WeightedFan { ambient, codim, degree, cones: Vec::new(), face_compatible: true }
    }

    /// The whole space with weight `q`.
    pub fn ambient_space(q: MultiPoly) -> Result<WeightedFan> {
        let n = q.nvars();
        let d = q.degree().unwrap_or(0);
        WeightedFan::from_compatible(n, 0, d, vec![WeightedCone::new(Cone::whole(n), Vec::new(), q)])
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn cones(&self) -> &[WeightedCone] {
        &self.cones
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    /// Whether distinct cones are known to meet along common faces.
    pub fn is_face_compatible(&self) -> bool {
        self.face_compatible
    }

    pub(crate) fn with_cones(&self, cones: Vec<WeightedCone>, face_compatible: bool) -> WeightedFan {
        WeightedFan { ambient: self.ambient, codim: self.codim, degree: self.degree, cones, face_compatible }
    }

    /// Sums weights of identical cones and drops zero weights.
    pub fn tidy(&self) -> WeightedFan {
        let mut acc: BTreeMap<ConeKey, WeightedCone> = BTreeMap::new();
        for wc in &self.cones {
            match acc.get_mut(&wc.cone.key()) {
                Some(e) => e.weight = &e.weight + &wc.weight,
                None => {
                    acc.insert(wc.cone.key(), wc.clone());
                }
            }
        }
        let cones = acc.into_values().filter(|wc| !wc.weight.is_zero()).collect();
        self.with_cones(cones, self.face_compatible)
    }

    pub fn scale(&self, c: &Rational) -> WeightedFan {
        let cones = self
            .cones
            .iter()
            .map(|wc| WeightedCone { weight: wc.weight.scale(c), ..wc.clone() })
            .filter(|wc| !wc.weight.is_zero())
            .collect();
        self.with_cones(cones, self.face_compatible)
    }

    pub fn neg(&self) -> WeightedFan {
        self.scale(&Rational::from_integer((-1).into()))
    }

    /// Multiplies every weight by a global polynomial of degree `e`.
    pub fn multiply_weight(&self, p: &MultiPoly) -> Result<WeightedFan> {
        let e = p.degree().unwrap_or(0);
        if !p.is_homogeneous_of(e) {
            return Err(Error::GradingMismatch(format!("{p} is not homogeneous")));
        }
        let cones = self
            .cones
            .iter()
            .map(|wc| WeightedCone { weight: reduce_on(&wc.cone, &(&wc.weight * p)), ..wc.clone() })
            .filter(|wc| !wc.weight.is_zero())
            .collect();
        Ok(WeightedFan {
            ambient: self.ambient,
            codim: self.codim,
            degree: self.degree + e,
            cones,
            face_compatible: self.face_compatible,
        })
    }

    /// Union of the cone lists, without simplification.
    pub fn concat(&self, other: &WeightedFan) -> Result<WeightedFan> {
        self.check_grading(other)?;
        let mut cones = self.cones.clone();
        cones.extend(other.cones.iter().cloned());
        Ok(self.with_cones(cones, false))
    }

    fn check_grading(&self, other: &WeightedFan) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        let empty_ok = self.cones.is_empty() || other.cones.is_empty();
        if self.codim != other.codim || (self.degree != other.degree && !empty_ok) {
            return Err(Error::GradingMismatch(format!(
                "({}, {}) vs ({}, {})",
                self.codim, self.degree, other.codim, other.degree
            )));
        }
        Ok(())
    }

    /// Canonical representative of the equivalence class.
    pub fn normalize(&self) -> WeightedFan {
        normalize(self)
    }
}

/// Sum of two weighted fans of equal grading, normalized.
pub fn add(a: &WeightedFan, b: &WeightedFan) -> Result<WeightedFan> {
    let mut s = a.concat(b)?;
    if a.cones.is_empty() {
        s.degree = b.degree;
    }
    Ok(normalize(&s))
}

/// Whether two weighted fans define the same element.
pub fn equivalent(a: &WeightedFan, b: &WeightedFan) -> Result<bool> {
    let d = a.concat(&b.neg())?;
    Ok(normalize(&d).is_empty())
}

/// Canonical sign of a hyperplane normal: first nonzero entry positive.
fn hyperplane_key(a: &[BigInt]) -> IntVec {
    match a.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => a.iter().map(|x| -x).collect(),
        _ => a.to_vec(),
    }
}

/// Common refinement of cones spanning one linear space: every cone is cut
/// by all facet hyperplanes of all cones. Returns the chambers together
/// with the indices of the input cones containing them.
pub(crate) fn overlay(cones: &[&Cone]) -> Vec<(Cone, Vec<usize>)> {
    let planes: BTreeSet<IntVec> = cones.iter().flat_map(|c| c.facets().iter().map(|a| hyperplane_key(a))).collect();
    let mut chambers: BTreeMap<ConeKey, (Cone, Vec<usize>)> = BTreeMap::new();
    for (i, c) in cones.iter().enumerate() {
        let mut pieces = vec![(*c).clone()];
        for h in &planes {
            let mut next = Vec::with_capacity(pieces.len());
            for p in pieces {
                let vals: Vec<BigInt> = p.rays().iter().map(|r| dot_int(h, r)).collect();
                let lin_cut = p.lineality().iter().any(|l| !dot_int(h, l).is_zero());
                let cut = lin_cut || (vals.iter().any(|v| v.is_positive()) && vals.iter().any(|v| v.is_negative()));
                if !cut {
                    next.push(p);
                    continue;
                }
                let neg: IntVec = h.iter().map(|x| -x).collect();
                for side in [h.clone(), neg] {
                    let mut ineqs = p.facets().to_vec();
                    ineqs.push(side);
                    next.push(Cone::from_inequalities(p.ambient(), &ineqs, p.conormal()));
                }
            }
            pieces = next;
        }
        for p in pieces {
            chambers.entry(p.key()).or_insert_with(|| (p.clone(), Vec::new())).1.push(i);
        }
    }
    chambers.into_values().collect()
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut j = i;
    while parent[j] != r {
        let next = parent[j];
        parent[j] = r;
        j = next;
    }
    r
}

/// Normal form of the weights on one linear span: the arrangement chambers
/// of all facet hyperplanes, merged across every hyperplane on which the
/// weight function does not jump.
fn normalize_span(cones: &[WeightedCone]) -> Vec<WeightedCone> {
    let refs: Vec<&Cone> = cones.iter().map(|wc| &wc.cone).collect();
    let frame = cones[0].frame.clone();
    let chambers: Vec<(Cone, MultiPoly)> = overlay(&refs)
        .into_iter()
        .map(|(c, idx)| {
            let w = idx.iter().fold(MultiPoly::zero(cones[0].weight.nvars()), |acc, &i| &acc + &cones[i].weight);
            (c, w)
        })
        .filter(|(_, w)| !w.is_zero())
        .collect();
    let mut walls: BTreeMap<ConeKey, (IntVec, Vec<usize>)> = BTreeMap::new();
    for (i, (c, _)) in chambers.iter().enumerate() {
        for (a, f) in c.facet_cones() {
            walls.entry(f.key()).or_insert_with(|| (hyperplane_key(&a), Vec::new())).1.push(i);
        }
    }
    let mut needed: BTreeSet<IntVec> = BTreeSet::new();
    for (h, idx) in walls.values() {
        if idx.len() != 2 || chambers[idx[0]].1 != chambers[idx[1]].1 {
            needed.insert(h.clone());
        }
    }
    let mut parent: Vec<usize> = (0..chambers.len()).collect();
    for (h, idx) in walls.values() {
        if idx.len() == 2 && !needed.contains(h) {
            let (a, b) = (find(&mut parent, idx[0]), find(&mut parent, idx[1]));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..chambers.len() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(i);
    }
    classes
        .into_values()
        .map(|members| {
            let first = &chambers[members[0]].0;
            let cone = if members.len() == 1 {
                first.clone()
            } else {
                let mut rays: Vec<IntVec> = Vec::new();
                let mut lin: Vec<IntVec> = Vec::new();
                for &m in &members {
                    rays.extend(chambers[m].0.rays().iter().cloned());
                    lin.extend(chambers[m].0.lineality().iter().cloned());
                }
                Cone::from_generators(first.ambient(), &rays, &lin)
            };
            WeightedCone { cone, frame: frame.clone(), weight: chambers[members[0]].1.clone() }
        })
        .collect()
}

pub fn normalize(w: &WeightedFan) -> WeightedFan {
    let mut groups: BTreeMap<Vec<IntVec>, Vec<WeightedCone>> = BTreeMap::new();
    for wc in &w.cones {
        groups.entry(wc.cone.conormal().to_vec()).or_default().push(wc.clone());
    }
    let mut out: Vec<WeightedCone> = Vec::new();
    for cones in groups.values() {
        out.extend(normalize_span(cones));
    }
    out.sort_by(|a, b| (a.cone.conormal(), a.cone.key()).cmp(&(b.cone.conormal(), b.cone.key())));
    w.with_cones(out, false)
}

/// Rational vectors of the given integer rows.
pub(crate) fn rat_rows(rows: &[IntVec]) -> Vec<RatVec> {
    rows.iter().map(|v| to_rat(v)).collect()
}
