//! Double description conversion between inequality and generator
//! representations of polyhedral cones, over the integers.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exactalg::{dot_int, primitive_int, IntVec};

struct Ray {
    v: IntVec,
    tight: FixedBitSet,
}

fn combine(s: &BigInt, v: &[BigInt], t: &BigInt, w: &[BigInt]) -> IntVec {
    primitive_int(v.iter().zip(w).map(|(a, b)| s * a - t * b).collect())
}

/// Generators of `{x : a.x >= 0 for a in ineqs, e.x = 0 for e in eqs}`,
/// returned as `(lineality basis, extreme rays)` modulo the lineality.
/// Rays are primitive; neither list is canonicalized.
pub fn h_to_v(n: usize, ineqs: &[IntVec], eqs: &[IntVec]) -> (Vec<IntVec>, Vec<IntVec>) {
    let m = ineqs.len();
    let mut lin: Vec<IntVec> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();
    let mut rays: Vec<Ray> = Vec::new();
    let constraints = eqs.iter().map(|e| (e, None)).chain(ineqs.iter().enumerate().map(|(i, a)| (a, Some(i))));
    for (a, idx) in constraints {
        if let Some(pos) = lin.iter().position(|l| !dot_int(a, l).is_zero()) {
            let mut l0 = lin.swap_remove(pos);
            let mut s = dot_int(a, &l0);
            if s.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                s = -s;
            }
            for l in lin.iter_mut() {
                let t = dot_int(a, l);
                if !t.is_zero() {
                    *l = combine(&s, l, &t, &l0);
                }
            }
            for r in rays.iter_mut() {
                let t = dot_int(a, &r.v);
                if !t.is_zero() {
                    r.v = combine(&s, &r.v, &t, &l0);
                }
                if let Some(i) = idx {
                    r.tight.insert(i);
                }
            }
            if let Some(i) = idx {
                let mut tight = FixedBitSet::with_capacity(m);
                tight.insert_range(..i);
                rays.push(Ray { v: l0, tight });
            }
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| dot_int(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() && (idx.is_some() || pos.is_empty()) {
            if let Some(i) = idx {
                for (r, v) in rays.iter_mut().zip(&vals) {
                    if v.is_zero() {
                        r.tight.insert(i);
                    }
                }
            }
            continue;
        }
        let mut next: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let mut common = rays[p].tight.clone();
                common.intersect_with(&rays[q].tight);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == q || !common.is_subset(&r.tight));
                if adjacent {
                    let v = combine(&vals[p], &rays[q].v, &vals[q], &rays[p].v);
                    if let Some(i) = idx {
                        common.insert(i);
                    }
                    next.push(Ray { v, tight: common });
                }
            }
        }
        let mut kept: Vec<Ray> = Vec::new();
        for (k, r) in rays.into_iter().enumerate() {
            if vals[k].is_zero() {
                let mut r = r;
                if let Some(i) = idx {
                    r.tight.insert(i);
                }
                kept.push(r);
            } else if vals[k].is_positive() && idx.is_some() {
                kept.push(r);
            }
        }
        kept.extend(next);
        rays = kept;
    }
    (lin, rays.into_iter().map(|r| r.v).collect())
}

/// Inequality description of `cone(rays) + span(lineality)`: returns
/// `(equations, facet normals)` with `a.x >= 0` on the cone.
pub fn v_to_h(n: usize, rays: &[IntVec], lineality: &[IntVec]) -> (Vec<IntVec>, Vec<IntVec>) {
    h_to_v(n, rays, lineality)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ivec;

    fn sorted(mut v: Vec<IntVec>) -> Vec<IntVec> {
        v.sort();
        v
    }

    #[test]
    fn positive_orthant() {
        let (lin, rays) = h_to_v(3, &[ivec(&[1, 0, 0]), ivec(&[0, 1, 0]), ivec(&[0, 0, 1])], &[]);
        assert!(lin.is_empty());
        assert_eq!(sorted(rays), vec![ivec(&[0, 0, 1]), ivec(&[0, 1, 0]), ivec(&[1, 0, 0])]);
    }

    #[test]
    fn half_plane_has_lineality() {
        let (lin, rays) = h_to_v(2, &[ivec(&[1, 0])], &[]);
        assert_eq!(lin.len(), 1);
        assert_eq!(lin[0][0], BigInt::zero());
        assert_eq!(rays, vec![ivec(&[1, 0])]);
    }

    #[test]
    fn square_cone_has_four_rays() {
        // Cone over the square with vertices (+-1, +-1, 1).
        let ineqs = [ivec(&[1, 0, 1]), ivec(&[-1, 0, 1]), ivec(&[0, 1, 1]), ivec(&[0, -1, 1])];
        let (lin, rays) = h_to_v(3, &ineqs, &[]);
        assert!(lin.is_empty());
        assert_eq!(
            sorted(rays),
            vec![ivec(&[-1, -1, 1]), ivec(&[-1, 1, 1]), ivec(&[1, -1, 1]), ivec(&[1, 1, 1])]
        );
        let (eqs, facets) = v_to_h(3, &[ivec(&[1, 1, 1]), ivec(&[1, -1, 1]), ivec(&[-1, 1, 1]), ivec(&[-1, -1, 1])], &[]);
        assert!(eqs.is_empty());
        assert_eq!(facets.len(), 4);
    }

    #[test]
    fn equation_cuts_to_a_ray() {
        let (lin, rays) = h_to_v(2, &[ivec(&[1, 0]), ivec(&[0, 1])], &[ivec(&[1, -1])]);
        assert!(lin.is_empty());
        assert_eq!(rays, vec![ivec(&[1, 1])]);
        let (lin, rays) = h_to_v(2, &[ivec(&[1, 0]), ivec(&[-1, 0])], &[]);
        assert_eq!(lin.len(), 1);
        assert!(rays.is_empty());
    }
}
