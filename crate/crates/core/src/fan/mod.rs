//! Rational polyhedral cones and fans.

pub mod cone;
pub mod dd;
pub mod lp;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

pub use cone::{Cone, ConeKey};

use crate::error::{Error, Result};
use crate::exactalg::{dot_int, format_rational, rank_int, IntVec, Rational};

/// A fan given by its maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    ambient: usize,
    cones: Vec<Cone>,
}

/// Result of [`locate_cone`].
#[derive(Clone, Debug)]
pub struct Location {
    /// Indices of the maximal cones containing the point.
    pub containing: Vec<usize>,
    /// Smallest face of the first containing cone that contains the point.
    pub face: Cone,
}

impl Fan {
    pub fn new(ambient: usize, cones: Vec<Cone>) -> Result<Fan> {
        for c in &cones {
            if c.ambient() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, found: c.ambient() });
            }
        }
        Ok(Fan { ambient, cones })
    }

    /// The fan with the whole space as its only cone.
    pub fn trivial(ambient: usize) -> Fan {
        Fan { ambient, cones: vec![Cone::whole(ambient)] }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn into_cones(self) -> Vec<Cone> {
        self.cones
    }

    /// Distinct faces of the given dimension over all maximal cones.
    pub fn faces_of_dim(&self, dim: usize) -> Vec<Cone> {
        let mut out: BTreeMap<ConeKey, Cone> = BTreeMap::new();
        for c in &self.cones {
            for f in c.all_faces() {
                if f.dim() == dim {
                    out.entry(f.key()).or_insert(f);
                }
            }
        }
        out.into_values().collect()
    }

    /// Pure full-dimensional fan in which every wall lies in exactly two
    /// maximal cones.
    pub fn is_complete(&self) -> bool {
        if self.cones.is_empty() {
            return self.ambient == 0;
        }
        if self.cones.iter().any(|c| c.dim() != self.ambient) {
            return false;
        }
        if self.cones.len() == 1 {
            return self.cones[0].facets().is_empty();
        }
        let mut walls: BTreeMap<ConeKey, usize> = BTreeMap::new();
        for c in &self.cones {
            for (_, f) in c.facet_cones() {
                *walls.entry(f.key()).or_default() += 1;
            }
        }
        walls.values().all(|&k| k == 2)
    }

    /// Distinct rays of all cones, sorted.
    pub fn rays(&self) -> Vec<IntVec> {
        let set: BTreeSet<IntVec> = self.cones.iter().flat_map(|c| c.rays().iter().cloned()).collect();
        set.into_iter().collect()
    }
}

/// Maximal cones of the refinement: full-dimensional pairwise intersections.
pub fn common_refinement(f1: &Fan, f2: &Fan) -> Result<Fan> {
    Ok(common_refinement_with_parents(f1, f2)?.0)
}

/// Whether some facet hyperplane of `a` has all of `b` on its closed outer side.
fn facet_separates(a: &Cone, b: &Cone) -> bool {
    a.facets().iter().any(|h| {
        b.lineality().iter().all(|l| dot_int(h, l).is_zero()) && b.rays().iter().all(|r| !dot_int(h, r).is_positive())
    })
}

/// As [`common_refinement`], also returning for each cone the indices of the
/// cones of `f1` and `f2` it lies in.
pub fn common_refinement_with_parents(f1: &Fan, f2: &Fan) -> Result<(Fan, Vec<(usize, usize)>)> {
    if f1.ambient != f2.ambient {
        return Err(Error::DimensionMismatch { expected: f1.ambient, found: f2.ambient });
    }
    let n = f1.ambient;
    let mut out: BTreeMap<ConeKey, (Cone, (usize, usize))> = BTreeMap::new();
    for (i, a) in f1.cones.iter().enumerate() {
        for (j, b) in f2.cones.iter().enumerate() {
            if a.dim() != n || b.dim() != n || facet_separates(a, b) || facet_separates(b, a) {
                continue;
            }
            let c = a.intersect(b);
            if c.dim() == n {
                out.entry(c.key()).or_insert((c, (i, j)));
            }
        }
    }
    let (cones, parents) = out.into_values().unzip();
    Ok((Fan { ambient: n, cones }, parents))
}

/// Splits a cone with lineality into the cones over the sign orthants of its
/// lineality basis.
fn split_lineality(c: &Cone) -> Vec<Cone> {
    let lin = c.lineality();
    let m = lin.len();
    let mut out = Vec::with_capacity(1 << m);
    for mask in 0..(1usize << m) {
        let mut rays = c.rays().to_vec();
        for (i, l) in lin.iter().enumerate() {
            if mask & (1 << i) == 0 {
                rays.push(l.clone());
            } else {
                rays.push(l.iter().map(|x| -x).collect());
            }
        }
        out.push(Cone::from_generators(c.ambient(), &rays, &[]));
    }
    out
}

/// Ray sets of a pulling triangulation of a pointed cone at its
/// lexicographically first ray.
fn pull(c: &Cone, out: &mut Vec<Vec<IntVec>>) {
    if c.is_simplicial() {
        out.push(c.rays().to_vec());
        return;
    }
    let v = c.rays()[0].clone();
    for (a, f) in c.facet_cones() {
        if dot_int(&a, &v).is_zero() {
            continue;
        }
        let mut sub = Vec::new();
        pull(&f, &mut sub);
        for mut rays in sub {
            rays.push(v.clone());
            out.push(rays);
        }
    }
}

/// Ray sets of a simplicial refinement of every maximal cone, each tagged
/// with the index of the cone it came from.
pub fn simplicial_rays(f: &Fan) -> Vec<(usize, Vec<IntVec>)> {
    let mut out = Vec::new();
    for (i, c) in f.cones.iter().enumerate() {
        for p in split_lineality(c) {
            let mut sub = Vec::new();
            pull(&p, &mut sub);
            out.extend(sub.into_iter().map(|r| (i, r)));
        }
    }
    out
}

/// Refines every maximal cone into simplicial cones, deterministically.
pub fn simplicialize(f: &Fan) -> Fan {
    let cones = simplicial_rays(f)
        .into_iter()
        .map(|(_, r)| Cone::from_generators(f.ambient, &r, &[]))
        .collect();
    Fan { ambient: f.ambient, cones }
}

/// Maximal cones containing `x` and the smallest face containing it.
pub fn locate_cone(f: &Fan, x: &[Rational]) -> Result<Location> {
    if x.len() != f.ambient {
        return Err(Error::DimensionMismatch { expected: f.ambient, found: x.len() });
    }
    let containing: Vec<usize> = (0..f.cones.len()).filter(|&i| f.cones[i].contains(x)).collect();
    let Some(&first) = containing.first() else {
        let s: Vec<String> = x.iter().map(format_rational).collect();
        return Err(Error::Uncovered(format!("({})", s.join(", "))));
    };
    let c = &f.cones[first];
    let tight: Vec<&IntVec> = c.facets().iter().filter(|a| crate::exactalg::dot_int_rat(a, x).is_zero()).collect();
    let rays: Vec<IntVec> = c
        .rays()
        .iter()
        .filter(|r| tight.iter().all(|a| dot_int(a, r).is_zero()))
        .cloned()
        .collect();
    let face = Cone::from_generators(f.ambient, &rays, c.lineality());
    Ok(Location { containing, face })
}

/// Whether the generators are linearly independent.
pub fn independent(vectors: &[IntVec], n: usize) -> bool {
    rank_int(vectors, n) == vectors.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{ivec, rvec};

    fn cone(rays: &[&[i64]]) -> Cone {
        let r: Vec<IntVec> = rays.iter().map(|v| ivec(v)).collect();
        Cone::from_generators(2, &r, &[])
    }

    fn quadrants() -> Fan {
        Fan::new(
            2,
            vec![
                cone(&[&[1, 0], &[0, 1]]),
                cone(&[&[-1, 0], &[0, 1]]),
                cone(&[&[-1, 0], &[0, -1]]),
                cone(&[&[1, 0], &[0, -1]]),
            ],
        )
        .unwrap()
    }

    fn key_set(f: &Fan) -> BTreeSet<ConeKey> {
        f.cones().iter().map(Cone::key).collect()
    }

    #[test]
    fn refinement_examples() {
        let q = quadrants();
        assert_eq!(key_set(&common_refinement(&q, &q).unwrap()), key_set(&q));
        let halves = Fan::new(
            2,
            vec![
                Cone::from_inequalities(2, &[ivec(&[1, 0])], &[]),
                Cone::from_inequalities(2, &[ivec(&[-1, 0])], &[]),
            ],
        )
        .unwrap();
        assert!(halves.is_complete());
        assert_eq!(key_set(&common_refinement(&q, &halves).unwrap()), key_set(&q));
        let line_a = Fan::new(
            2,
            vec![
                Cone::from_inequalities(2, &[ivec(&[0, 1])], &[]),
                Cone::from_inequalities(2, &[ivec(&[0, -1])], &[]),
            ],
        )
        .unwrap();
        let line_b = Fan::new(
            2,
            vec![
                Cone::from_inequalities(2, &[ivec(&[1, -1])], &[]),
                Cone::from_inequalities(2, &[ivec(&[-1, 1])], &[]),
            ],
        )
        .unwrap();
        let r = common_refinement(&line_a, &line_b).unwrap();
        assert_eq!(r.cones().len(), 4);
        assert!(r.is_complete());
    }

    #[test]
    fn simplicialize_examples() {
        let q = quadrants();
        assert_eq!(key_set(&simplicialize(&q)), key_set(&q));
        let sq: Vec<IntVec> = [[1, 1, 1], [1, -1, 1], [-1, 1, 1], [-1, -1, 1]].iter().map(|v| ivec(v)).collect();
        let f = Fan::new(3, vec![Cone::from_generators(3, &sq, &[])]).unwrap();
        let s = simplicialize(&f);
        assert_eq!(s.cones().len(), 2);
        assert!(s.cones().iter().all(Cone::is_simplicial));
        let halves = Fan::new(2, vec![Cone::from_inequalities(2, &[ivec(&[1, 0])], &[])]).unwrap();
        let s = simplicialize(&halves);
        assert_eq!(s.cones().len(), 2);
    }

    #[test]
    fn locate_examples() {
        let q = quadrants();
        let loc = locate_cone(&q, &rvec(&[1, 1])).unwrap();
        assert_eq!(loc.containing, vec![0]);
        assert_eq!(loc.face, q.cones()[0]);
        let loc = locate_cone(&q, &rvec(&[1, 0])).unwrap();
        assert_eq!(loc.containing, vec![0, 3]);
        assert_eq!(loc.face.rays(), &[ivec(&[1, 0])]);
        let loc = locate_cone(&q, &rvec(&[0, 0])).unwrap();
        assert_eq!(loc.face.dim(), 0);
        let half = Fan::new(2, vec![cone(&[&[1, 0], &[0, 1]])]).unwrap();
        assert!(matches!(locate_cone(&half, &rvec(&[-1, -1])), Err(Error::Uncovered(_))));
    }
}
