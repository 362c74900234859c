use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use num_traits::{Signed, Zero};

use super::dd::{h_to_v, v_to_h};
use super::lp::strict_point;
use crate::exactalg::lattice::conormal_lattice;
use crate::exactalg::{dot_int, dot_int_rat, primitive, primitive_int, rref, to_rat, IntVec, RatVec, Rational};

/// Canonical identity of a cone: its reduced lineality basis and sorted rays.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConeKey {
    pub lineality: Vec<IntVec>,
    pub rays: Vec<IntVec>,
}

/// Closed rational polyhedral cone with both descriptions kept canonical.
///
/// Lineality rows are the primitive rows of a reduced echelon basis; rays are
/// primitive, reduced modulo the lineality (zero at its pivot columns) and
/// sorted. Facet normals point inward and are reduced modulo the conormal
/// space, whose lattice basis is stored in Hermite normal form.
#[derive(Clone, Debug)]
pub struct Cone {
    ambient: usize,
    lineality: Vec<IntVec>,
    lin_pivots: Vec<usize>,
    rays: Vec<IntVec>,
    facets: Vec<IntVec>,
    conormal: Vec<IntVec>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.lineality == other.lineality && self.rays == other.rays
    }
}

impl Eq for Cone {}

/// Primitive rows of the reduced echelon form of `rows`, with pivot columns.
pub(crate) fn echelon_basis(rows: &[IntVec], n: usize) -> (Vec<IntVec>, Vec<usize>) {
    let r: Vec<RatVec> = rows.iter().map(|v| to_rat(v)).collect();
    let (red, pivots) = rref(&r, n);
    (red.iter().map(|v| primitive(v)).collect(), pivots)
}

/// Reduces `v` modulo the span of echelon rows, zeroing the pivot columns.
pub(crate) fn reduce_mod(v: &[num_bigint::BigInt], basis: &[IntVec], pivots: &[usize]) -> IntVec {
    let mut v = v.to_vec();
    for (row, &p) in basis.iter().zip(pivots) {
        if v[p].is_zero() {
            continue;
        }
        let (a, b) = (row[p].clone(), v[p].clone());
        v = v.iter().zip(row).map(|(x, y)| &a * x - &b * y).collect();
        if a.is_negative() {
            v = v.iter().map(|x| -x).collect();
        }
    }
    primitive_int(v)
}

impl Cone {
    /// `cone(rays) + span(lineality)`; generators may be redundant.
    pub fn from_generators(ambient: usize, rays: &[IntVec], lineality: &[IntVec]) -> Cone {
        let (dual_lin, dual_rays) = h_to_v(ambient, rays, lineality);
        let mut span_gens: Vec<IntVec> = lineality.to_vec();
        span_gens.extend(rays.iter().cloned());
        let conormal = conormal_lattice(&span_gens, ambient);
        debug_assert_eq!(conormal.len(), dual_lin.len());
        let (con_basis, con_piv) = echelon_basis(&conormal, ambient);
        let facets: BTreeSet<IntVec> = dual_rays.iter().map(|a| reduce_mod(a, &con_basis, &con_piv)).collect();
        let facets: Vec<IntVec> = facets.into_iter().collect();

        let mut eqs: Vec<IntVec> = facets.clone();
        eqs.extend(conormal.iter().cloned());
        let (lin_raw, _) = h_to_v(ambient, &[], &eqs);
        let (lin, lin_pivots) = echelon_basis(&lin_raw, ambient);

        // A generator is extreme iff no other generator is tight on a strictly
        // larger set of facets.
        let mut cands: Vec<(IntVec, FixedBitSet)> = Vec::new();
        for r in rays {
            let v = reduce_mod(r, &lin, &lin_pivots);
            if v.iter().all(Zero::is_zero) || cands.iter().any(|(w, _)| *w == v) {
                continue;
            }
            let mut tight = FixedBitSet::with_capacity(facets.len());
            for (i, a) in facets.iter().enumerate() {
                if dot_int(a, &v).is_zero() {
                    tight.insert(i);
                }
            }
            cands.push((v, tight));
        }
        let kept: BTreeSet<IntVec> = cands
            .iter()
            .filter(|(v, t)| {
                !cands.iter().any(|(w, u)| w != v && t.is_subset(u) && t != u)
            })
            .map(|(v, _)| v.clone())
            .collect();
        Cone {
            ambient,
            lineality: lin,
            lin_pivots,
            rays: kept.into_iter().collect(),
            facets,
            conormal,
        }
    }

    pub fn from_rational_generators(ambient: usize, rays: &[RatVec], lineality: &[RatVec]) -> Cone {
        let r: Vec<IntVec> = rays.iter().map(|v| primitive(v)).collect();
        let l: Vec<IntVec> = lineality.iter().map(|v| primitive(v)).collect();
        Cone::from_generators(ambient, &r, &l)
    }

    /// `{x : a.x >= 0 for a in ineqs, e.x = 0 for e in eqs}`.
    pub fn from_inequalities(ambient: usize, ineqs: &[IntVec], eqs: &[IntVec]) -> Cone {
        let (lin, rays) = h_to_v(ambient, ineqs, eqs);
        Cone::from_generators(ambient, &rays, &lin)
    }

    pub fn whole(ambient: usize) -> Cone {
        let id: Vec<IntVec> = (0..ambient)
            .map(|i| (0..ambient).map(|j| num_bigint::BigInt::from((i == j) as i32)).collect())
            .collect();
        Cone::from_generators(ambient, &[], &id)
    }

    pub fn origin(ambient: usize) -> Cone {
        Cone::from_generators(ambient, &[], &[])
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.ambient - self.conormal.len()
    }

    pub fn codim(&self) -> usize {
        self.conormal.len()
    }

    pub fn lineality(&self) -> &[IntVec] {
        &self.lineality
    }

    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    /// Inward facet normals: `a.x >= 0` on the cone.
    pub fn facets(&self) -> &[IntVec] {
        &self.facets
    }

    /// Hermite-normal lattice basis of the integer covectors vanishing on the span.
    pub fn conormal(&self) -> &[IntVec] {
        &self.conormal
    }

    pub fn key(&self) -> ConeKey {
        ConeKey { lineality: self.lineality.clone(), rays: self.rays.clone() }
    }

    /// Generators of the linear span.
    pub fn span_generators(&self) -> Vec<IntVec> {
        self.lineality.iter().chain(&self.rays).cloned().collect()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() + self.lineality.len() == self.dim()
    }

    pub fn reduce_mod_lineality(&self, v: &[num_bigint::BigInt]) -> IntVec {
        reduce_mod(v, &self.lineality, &self.lin_pivots)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.conormal.iter().all(|a| dot_int_rat(a, x).is_zero())
            && self.facets.iter().all(|a| !dot_int_rat(a, x).is_negative())
    }

    pub fn contains_in_relint(&self, x: &[Rational]) -> bool {
        self.conormal.iter().all(|a| dot_int_rat(a, x).is_zero())
            && self.facets.iter().all(|a| dot_int_rat(a, x).is_positive())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.span_generators().iter().all(|r| self.contains(&to_rat(r)))
            && other.lineality.iter().all(|l| {
                let neg: IntVec = l.iter().map(|x| -x).collect();
                self.contains(&to_rat(&neg))
            })
    }

    /// A point in the relative interior.
    pub fn relint_point(&self) -> RatVec {
        let mut p = vec![Rational::zero(); self.ambient];
        for r in &self.rays {
            for (x, y) in p.iter_mut().zip(r) {
                *x += Rational::from_integer(y.clone());
            }
        }
        p
    }

    /// The face on which the covector `a` (nonnegative on the cone) vanishes.
    pub fn face(&self, a: &[num_bigint::BigInt]) -> Cone {
        let rays: Vec<IntVec> = self.rays.iter().filter(|r| dot_int(a, r).is_zero()).cloned().collect();
        Cone::from_generators(self.ambient, &rays, &self.lineality)
    }

    /// Facets paired with their inward normals.
    pub fn facet_cones(&self) -> Vec<(IntVec, Cone)> {
        self.facets.iter().map(|a| (a.clone(), self.face(a))).collect()
    }

    /// All faces, including the cone itself, deduplicated.
    pub fn all_faces(&self) -> Vec<Cone> {
        let mut seen: BTreeSet<ConeKey> = BTreeSet::new();
        let mut out = Vec::new();
        let mut stack = vec![self.clone()];
        while let Some(c) = stack.pop() {
            if !seen.insert(c.key()) {
                continue;
            }
            for (_, f) in c.facet_cones() {
                stack.push(f);
            }
            out.push(c);
        }
        out
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        let mut eqs = self.conormal.clone();
        eqs.extend(other.conormal.iter().cloned());
        Cone::from_inequalities(self.ambient, &ineqs, &eqs)
    }

    /// Whether the relative interiors of two cones of full dimension in a
    /// common span meet, decided by an exact linear program.
    pub fn interiors_meet(&self, other: &Cone) -> bool {
        let mut strict = self.facets.clone();
        strict.extend(other.facets.iter().cloned());
        let mut eqs = self.conormal.clone();
        eqs.extend(other.conormal.iter().cloned());
        if strict.is_empty() {
            return true;
        }
        strict_point(self.ambient, &strict, &eqs).is_some()
    }

    /// Equations and inward normals of the cone, recomputed from the rays.
    pub fn h_representation(&self) -> (Vec<IntVec>, Vec<IntVec>) {
        v_to_h(self.ambient, &self.rays, &self.lineality)
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |vs: &[IntVec]| {
            vs.iter()
                .map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "cone[{}]", show(&self.rays))?;
        if !self.lineality.is_empty() {
            write!(f, " + span[{}]", show(&self.lineality))?;
        }
        Ok(())
    }
}
