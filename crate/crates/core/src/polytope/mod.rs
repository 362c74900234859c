//! Rational polytopes, support functions, volumes and mixed volumes.

mod hull;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::lattice::{integer_kernel, hnf, unimodular_complement};
use crate::exactalg::{add_vec, dot, is_zero_vec, solve_combination, to_rat, IntVec, RatVec, Rational};
use crate::fan::{Cone, Fan};

/// Convex hull of finitely many rational points, stored by its sorted
/// irredundant vertex list together with its facet description.
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<RatVec>,
    rank: usize,
    direction_perp: Vec<IntVec>,
    facets: Vec<(IntVec, Rational)>,
    volume: Rational,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        self.rank
    }

    /// Primitive outward facet normals with their support values. For a
    /// lower-dimensional polytope these are facets inside its affine hull.
    pub fn facets(&self) -> &[(IntVec, Rational)] {
        &self.facets
    }

    /// Lattice basis of the covectors constant on the polytope.
    pub fn orthogonal_lattice(&self) -> &[IntVec] {
        &self.direction_perp
    }

    pub fn point(p: RatVec) -> Polytope {
        convex_hull(&[p]).expect("nonempty")
    }

    pub fn translate(&self, t: &[Rational]) -> Polytope {
        let pts: Vec<RatVec> = self.vertices.iter().map(|v| add_vec(v, t)).collect();
        convex_hull(&pts).expect("nonempty")
    }

    pub fn scale(&self, c: &Rational) -> Polytope {
        let pts: Vec<RatVec> = self.vertices.iter().map(|v| v.iter().map(|x| x * c).collect()).collect();
        convex_hull(&pts).expect("nonempty")
    }
}

/// Irredundant hull of a nonempty point list.
pub fn convex_hull(points: &[RatVec]) -> Result<Polytope> {
    let Some(first) = points.first() else {
        return Err(Error::EmptyInput);
    };
    let n = first.len();
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: p.len() });
    }
    let h = hull::hull(n, points);
    Ok(Polytope {
        dim: n,
        vertices: h.vertices,
        rank: h.rank,
        direction_perp: h.direction_perp,
        facets: h.facets.into_iter().map(|f| (f.normal, f.offset)).collect(),
        volume: h.volume,
    })
}

pub fn minkowski_sum(a: &Polytope, b: &Polytope) -> Result<Polytope> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, found: b.dim });
    }
    let pts: BTreeSet<RatVec> = a
        .vertices
        .iter()
        .flat_map(|u| b.vertices.iter().map(move |v| add_vec(u, v)))
        .collect();
    convex_hull(&pts.into_iter().collect::<Vec<_>>())
}

/// `max` of `v . a` over the polytope.
pub fn support_value(a: &Polytope, v: &[Rational]) -> Rational {
    a.vertices.iter().map(|x| dot(v, x)).max().expect("nonempty polytope")
}

/// The face on which `gamma` attains its maximum.
pub fn face_in_direction(a: &Polytope, gamma: &[Rational]) -> Result<Polytope> {
    if gamma.len() != a.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, found: gamma.len() });
    }
    if is_zero_vec(gamma) {
        return Err(Error::ZeroCovector);
    }
    let h = support_value(a, gamma);
    let pts: Vec<RatVec> = a.vertices.iter().filter(|x| dot(gamma, x) == h).cloned().collect();
    convex_hull(&pts)
}

/// Euclidean volume in the ambient dimension.
pub fn volume(a: &Polytope) -> Rational {
    a.volume.clone()
}

fn check_tuple(polys: &[Polytope]) -> Result<usize> {
    let Some(first) = polys.first() else {
        return Err(Error::EmptyInput);
    };
    let n = first.dim;
    if polys.len() != n {
        return Err(Error::CountMismatch { expected: n, found: polys.len() });
    }
    if let Some(p) = polys.iter().find(|p| p.dim != n) {
        return Err(Error::DimensionMismatch { expected: n, found: p.dim });
    }
    Ok(n)
}

/// Mixed volume by inclusion-exclusion over Minkowski sums, normalized so
/// that `n` copies of `A` give `n! Vol(A)`.
pub fn mixed_volume_polarization(polys: &[Polytope]) -> Result<Rational> {
    let n = check_tuple(polys)?;
    let mut sums: Vec<Option<Polytope>> = vec![None; 1 << n];
    let mut total = Rational::zero();
    for mask in 1usize..(1 << n) {
        let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        let rest = mask & !(1 << top);
        let s = match &sums[rest] {
            None => polys[top].clone(),
            Some(p) => minkowski_sum(p, &polys[top])?,
        };
        let v = volume(&s);
        if (n - mask.count_ones() as usize).is_multiple_of(2) {
            total += v;
        } else {
            total -= v;
        }
        sums[mask] = Some(s);
    }
    Ok(total)
}

/// Coordinates of the points of a face of `gamma` in a lattice basis of
/// `gamma^perp`, dropping the constant last coordinate.
fn project_to_hyperplane(gamma: &[BigInt], pts: &[RatVec]) -> Vec<RatVec> {
    let n = gamma.len();
    let mut basis: Vec<RatVec> = hnf(&integer_kernel(&[gamma.to_vec()], n)).iter().map(|b| to_rat(b)).collect();
    let c = unimodular_complement(gamma).expect("primitive normal");
    basis.push(to_rat(&c));
    pts.iter()
        .map(|x| {
            let mut y = solve_combination(&basis, x).expect("unimodular basis");
            y.truncate(n - 1);
            y
        })
        .collect()
}

/// Mixed volume by the facet recursion
/// `V(A_1..A_n) = sum_gamma A_1(gamma) V(A_2^gamma..A_n^gamma)` over the
/// primitive facet normals of `A_2 + .. + A_n`.
pub fn mixed_volume_facet_recursion(polys: &[Polytope]) -> Result<Rational> {
    let n = check_tuple(polys)?;
    if n == 1 {
        let xs: Vec<&Rational> = polys[0].vertices.iter().map(|v| &v[0]).collect();
        let hi = xs.iter().max().unwrap();
        let lo = xs.iter().min().unwrap();
        return Ok((*hi).clone() - (*lo).clone());
    }
    let mut sum = polys[1].clone();
    for p in &polys[2..] {
        sum = minkowski_sum(&sum, p)?;
    }
    let normals: Vec<IntVec> = if sum.rank + 1 < n {
        return Ok(Rational::zero());
    } else if sum.rank + 1 == n {
        let u = sum.direction_perp[0].clone();
        vec![u.iter().map(|x| -x).collect(), u]
    } else {
        sum.facets.iter().map(|(a, _)| a.clone()).collect()
    };
    let mut total = Rational::zero();
    for g in normals {
        let gr = to_rat(&g);
        let h = support_value(&polys[0], &gr);
        if h.is_zero() {
            continue;
        }
        let faces: Vec<Polytope> = polys[1..]
            .iter()
            .map(|p| {
                let f = face_in_direction(p, &gr)?;
                convex_hull(&project_to_hyperplane(&g, &f.vertices))
            })
            .collect::<Result<_>>()?;
        total += h * mixed_volume_facet_recursion(&faces)?;
    }
    Ok(total)
}

/// Normal fan; cone `i` is the closure of the region where vertex `i`
/// attains the support value.
pub fn normal_fan(a: &Polytope) -> Fan {
    let n = a.dim;
    if a.rank == 0 {
        return Fan::trivial(n);
    }
    let cones = a
        .vertices
        .iter()
        .map(|v| {
            let rays: Vec<IntVec> = a
                .facets
                .iter()
                .filter(|(g, h)| &dot(&to_rat(g), v) == h)
                .map(|(g, _)| g.clone())
                .collect();
            Cone::from_generators(n, &rays, &a.direction_perp)
        })
        .collect();
    Fan::new(n, cones).expect("consistent dimension")
}

/// Vertex-list JSON form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dim: usize,
    #[serde(with = "crate::exactalg::serde_rat::mat")]
    pub vertices: Vec<RatVec>,
}

impl From<&Polytope> for PolytopeJson {
    fn from(p: &Polytope) -> Self {
        PolytopeJson { dim: p.dim, vertices: p.vertices.clone() }
    }
}

impl TryFrom<PolytopeJson> for Polytope {
    type Error = Error;
    fn try_from(j: PolytopeJson) -> Result<Polytope> {
        if let Some(v) = j.vertices.iter().find(|v| v.len() != j.dim) {
            return Err(Error::DimensionMismatch { expected: j.dim, found: v.len() });
        }
        convex_hull(&j.vertices)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, rvec};

    fn poly(pts: &[&[i64]]) -> Polytope {
        convex_hull(&pts.iter().map(|p| rvec(p)).collect::<Vec<_>>()).unwrap()
    }

    fn square() -> Polytope {
        poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])
    }

    #[test]
    fn hull_examples() {
        let t = convex_hull(&[rvec(&[0, 0]), rvec(&[1, 0]), rvec(&[0, 1]), vec![rat(1, 2), rat(1, 4)]]).unwrap();
        assert_eq!(t.vertices(), &[rvec(&[0, 0]), rvec(&[0, 1]), rvec(&[1, 0])]);
        assert_eq!(poly(&[&[3, 4]]).vertices(), &[rvec(&[3, 4])]);
        let s = convex_hull(&[rvec(&[0, 0]), rvec(&[1, 0]), rvec(&[0, 1]), rvec(&[1, 1]), vec![rat(1, 2), rat(1, 2)]]).unwrap();
        assert_eq!(s.vertices().len(), 4);
        assert!(matches!(convex_hull(&[]), Err(Error::EmptyInput)));
        // Collinear and coplanar points.
        let seg = poly(&[&[0, 0, 0], &[1, 1, 1], &[2, 2, 2]]);
        assert_eq!(seg.vertices(), &[rvec(&[0, 0, 0]), rvec(&[2, 2, 2])]);
        let sq3 = poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[1, 0, 0]]);
        assert_eq!(sq3.vertices().len(), 4);
        assert_eq!(sq3.affine_dim(), 2);
    }

    #[test]
    fn minkowski_examples() {
        let a = poly(&[&[0, 0], &[1, 0]]);
        let b = poly(&[&[0, 0], &[0, 1]]);
        assert_eq!(minkowski_sum(&a, &b).unwrap(), square());
        let t = Polytope::point(rvec(&[2, 3]));
        assert_eq!(minkowski_sum(&a, &t).unwrap(), a.translate(&rvec(&[2, 3])));
        assert_eq!(minkowski_sum(&square(), &square()).unwrap(), square().scale(&rat(2, 1)));
    }

    #[test]
    fn support_and_faces() {
        assert_eq!(support_value(&square(), &rvec(&[1, 1])), rat(2, 1));
        assert_eq!(support_value(&poly(&[&[0, 0], &[1, 0]]), &rvec(&[-1, 0])), rat(0, 1));
        assert_eq!(support_value(&poly(&[&[0, 0], &[1, 0], &[0, 1]]), &rvec(&[1, 1])), rat(1, 1));
        assert_eq!(face_in_direction(&square(), &rvec(&[1, 0])).unwrap(), poly(&[&[1, 0], &[1, 1]]));
        assert_eq!(face_in_direction(&square(), &rvec(&[1, 1])).unwrap(), poly(&[&[1, 1]]));
        let seg = poly(&[&[0, 0], &[1, 0]]);
        assert_eq!(face_in_direction(&seg, &rvec(&[0, 1])).unwrap(), seg);
        assert!(matches!(face_in_direction(&seg, &rvec(&[0, 0])), Err(Error::ZeroCovector)));
    }

    #[test]
    fn volume_examples() {
        assert_eq!(volume(&square()), rat(1, 1));
        assert_eq!(volume(&poly(&[&[0, 0], &[1, 0], &[0, 1]])), rat(1, 2));
        assert_eq!(volume(&poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), rat(1, 6));
        assert_eq!(volume(&poly(&[&[0, 0], &[1, 1]])), rat(0, 1));
        let cube = poly(&[&[0, 0, 0], &[2, 0, 0], &[0, 2, 0], &[0, 0, 2], &[2, 2, 0], &[2, 0, 2], &[0, 2, 2], &[2, 2, 2], &[1, 1, 1]]);
        assert_eq!(volume(&cube), rat(8, 1));
        assert_eq!(cube.vertices().len(), 8);
    }

    #[test]
    fn mixed_volume_examples() {
        let a = poly(&[&[0, 0], &[1, 0]]);
        let b = poly(&[&[0, 0], &[0, 1]]);
        let c = poly(&[&[0, 0], &[1, 1]]);
        for f in [mixed_volume_polarization, mixed_volume_facet_recursion] {
            assert_eq!(f(&[a.clone(), b.clone()]).unwrap(), rat(1, 1));
            assert_eq!(f(&[c.clone(), c.clone()]).unwrap(), rat(0, 1));
            assert_eq!(f(&[square(), square()]).unwrap(), rat(2, 1));
            assert_eq!(f(&[Polytope::point(rvec(&[1, 2])), square()]).unwrap(), rat(0, 1));
        }
        assert!(matches!(mixed_volume_polarization(std::slice::from_ref(&a)), Err(Error::CountMismatch { .. })));
    }

    #[test]
    fn oracles_agree_on_random_tuples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in 2..=4 {
            for _ in 0..3 {
                let polys: Vec<Polytope> = (0..n)
                    .map(|_| {
                        let k = rng.gen_range(1..=6);
                        let pts: Vec<RatVec> =
                            (0..k).map(|_| (0..n).map(|_| rat(rng.gen_range(-8..=8), rng.gen_range(1..=4))).collect()).collect();
                        convex_hull(&pts).unwrap()
                    })
                    .collect();
                assert_eq!(mixed_volume_polarization(&polys).unwrap(), mixed_volume_facet_recursion(&polys).unwrap());
            }
        }
    }

    #[test]
    fn normal_fan_examples() {
        let seg = normal_fan(&poly(&[&[0, 0], &[1, 0]]));
        assert_eq!(seg.cones().len(), 2);
        assert!(seg.is_complete());
        assert!(seg.cones().iter().all(|c| c.lineality() == [crate::exactalg::ivec(&[0, 1])]));
        let sq = normal_fan(&square());
        assert_eq!(sq.cones().len(), 4);
        assert!(sq.is_complete());
        let tri = normal_fan(&poly(&[&[0, 0], &[1, 0], &[0, 1]]));
        assert_eq!(
            tri.rays(),
            vec![crate::exactalg::ivec(&[-1, 0]), crate::exactalg::ivec(&[0, -1]), crate::exactalg::ivec(&[1, 1])]
        );
        assert_eq!(normal_fan(&Polytope::point(rvec(&[1, 1]))).cones().len(), 1);
    }
}
