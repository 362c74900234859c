//! Exact beneath-beyond convex hull in integer coordinates.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactalg::lattice::conormal_lattice;
use crate::exactalg::{det_int, dot_int, primitive_int, rref, to_rat, IntVec, RatVec, Rational};

/// Facet of the hull, with all coplanar simplicial pieces merged.
#[derive(Clone, Debug)]
pub(crate) struct HullFacet {
    /// Primitive outward normal in ambient coordinates, zero off the
    /// projection coordinates.
    pub normal: IntVec,
    /// `max` of the normal over the polytope, in the original scale.
    pub offset: Rational,
}

#[derive(Clone, Debug)]
pub(crate) struct Hull {
    /// Affine dimension.
    pub rank: usize,
    /// Lattice basis of the covectors constant on the polytope.
    pub direction_perp: Vec<IntVec>,
    pub facets: Vec<HullFacet>,
    /// Extreme points, sorted.
    pub vertices: Vec<RatVec>,
    /// Ambient volume; zero unless full-dimensional.
    pub volume: Rational,
}

struct Simplex {
    verts: Vec<usize>,
    normal: IntVec,
    offset: BigInt,
    outside: Vec<usize>,
    alive: bool,
}

fn sub(a: &[BigInt], b: &[BigInt]) -> IntVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Outward normal of the hyperplane through `pts` (r points in r-space),
/// oriented away from `inside_scaled / scale`.
fn hyperplane(pts: &[&IntVec], inside_scaled: &[BigInt], scale: usize) -> (IntVec, BigInt) {
    let r = pts[0].len();
    let diffs: Vec<IntVec> = pts[1..].iter().map(|p| sub(p, pts[0])).collect();
    let mut normal: IntVec = (0..r)
        .map(|j| {
            let minor: Vec<IntVec> = diffs
                .iter()
                .map(|d| d.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let m = det_int(&minor);
            if j % 2 == 0 { m } else { -m }
        })
        .collect();
    normal = primitive_int(normal);
    let mut offset = dot_int(&normal, pts[0]);
    let s = BigInt::from(scale);
    if dot_int(&normal, inside_scaled) > &offset * &s {
        normal = normal.iter().map(|x| -x).collect();
        offset = -offset;
    }
    (normal, offset)
}

/// Simplicial boundary of the hull of full-dimensional integer points in
/// `r`-space, as vertex index tuples, plus the apex used for volumes.
fn quickhull(pts: &[IntVec], r: usize) -> (Vec<Vec<usize>>, Vec<(IntVec, BigInt)>, usize) {
    // Initial simplex: greedily extend an affinely independent set.
    let mut simplex = vec![0usize];
    let mut basis: Vec<RatVec> = Vec::new();
    for (i, p) in pts.iter().enumerate().skip(1) {
        if simplex.len() == r + 1 {
            break;
        }
        let mut cand = basis.clone();
        cand.push(to_rat(&sub(p, &pts[0])));
        if rref(&cand, r).1.len() == cand.len() {
            basis = cand;
            simplex.push(i);
        }
    }
    let mut inside: IntVec = vec![BigInt::zero(); r];
    for &i in &simplex {
        for (x, y) in inside.iter_mut().zip(&pts[i]) {
            *x += y;
        }
    }
    let scale = r + 1;
    let mut facets: Vec<Simplex> = Vec::new();
    for skip in 0..=r {
        let verts: Vec<usize> = simplex.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &v)| v).collect();
        let refs: Vec<&IntVec> = verts.iter().map(|&v| &pts[v]).collect();
        let (normal, offset) = hyperplane(&refs, &inside, scale);
        facets.push(Simplex { verts, normal, offset, outside: Vec::new(), alive: true });
    }
    let in_simplex: BTreeSet<usize> = simplex.iter().copied().collect();
    for (i, p) in pts.iter().enumerate() {
        if in_simplex.contains(&i) {
            continue;
        }
        if let Some(f) = facets.iter_mut().find(|f| dot_int(&f.normal, p) > f.offset) {
            f.outside.push(i);
        }
    }
    let mut ridges: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    let ridge_of = |verts: &[usize], skip: usize| -> Vec<usize> {
        verts.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &v)| v).collect()
    };
    for (fi, f) in facets.iter().enumerate() {
        for k in 0..f.verts.len() {
            ridges.entry(ridge_of(&f.verts, k)).or_default().push(fi);
        }
    }
    let mut queue: Vec<usize> = (0..facets.len()).collect();
    while let Some(fi) = queue.pop() {
        if !facets[fi].alive || facets[fi].outside.is_empty() {
            continue;
        }
        let f = &facets[fi];
        let apex = *f
            .outside
            .iter()
            .max_by_key(|&&i| dot_int(&f.normal, &pts[i]) - &f.offset)
            .expect("nonempty conflict list");
        let p = &pts[apex];
        // Visible region by flood fill from fi.
        let mut visible: BTreeSet<usize> = BTreeSet::new();
        let mut stack = vec![fi];
        visible.insert(fi);
        let mut horizon: Vec<(Vec<usize>, usize)> = Vec::new();
        while let Some(g) = stack.pop() {
            let verts = facets[g].verts.clone();
            for k in 0..verts.len() {
                let ridge = ridge_of(&verts, k);
                let nb = ridges[&ridge].iter().copied().find(|&h| h != g).expect("closed boundary");
                if visible.contains(&nb) {
                    continue;
                }
                if dot_int(&facets[nb].normal, p) > facets[nb].offset {
                    visible.insert(nb);
                    stack.push(nb);
                } else {
                    horizon.push((ridge, nb));
                }
            }
        }
        let mut orphans: Vec<usize> = Vec::new();
        for &g in &visible {
            facets[g].alive = false;
            orphans.append(&mut facets[g].outside);
            let verts = facets[g].verts.clone();
            for k in 0..verts.len() {
                let ridge = ridge_of(&verts, k);
                if let Some(list) = ridges.get_mut(&ridge) {
                    list.retain(|&h| h != g);
                    if list.is_empty() {
                        ridges.remove(&ridge);
                    }
                }
            }
        }
        let mut new_ids = Vec::new();
        for (ridge, _) in horizon {
            let mut verts = ridge.clone();
            verts.push(apex);
            let refs: Vec<&IntVec> = verts.iter().map(|&v| &pts[v]).collect();
            let (normal, offset) = hyperplane(&refs, &inside, scale);
            let id = facets.len();
            for k in 0..verts.len() {
                ridges.entry(ridge_of(&verts, k)).or_default().push(id);
            }
            facets.push(Simplex { verts, normal, offset, outside: Vec::new(), alive: true });
            new_ids.push(id);
        }
        for i in orphans {
            if i == apex {
                continue;
            }
            if let Some(&g) = new_ids.iter().find(|&&g| dot_int(&facets[g].normal, &pts[i]) > facets[g].offset) {
                facets[g].outside.push(i);
            }
        }
        queue.extend(new_ids);
    }
    let alive: Vec<&Simplex> = facets.iter().filter(|f| f.alive).collect();
    (
        alive.iter().map(|f| f.verts.clone()).collect(),
        alive.iter().map(|f| (f.normal.clone(), f.offset.clone())).collect(),
        simplex[0],
    )
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Hull of a nonempty rational point set.
pub(crate) fn hull(n: usize, points: &[RatVec]) -> Hull {
    let uniq: BTreeSet<RatVec> = points.iter().cloned().collect();
    let pts: Vec<RatVec> = uniq.into_iter().collect();
    let den = pts
        .iter()
        .flat_map(|p| p.iter())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ipts: Vec<IntVec> = pts
        .iter()
        .map(|p| p.iter().map(|x| x.numer() * (&den / x.denom())).collect())
        .collect();
    let diffs: Vec<IntVec> = ipts.iter().skip(1).map(|p| sub(p, &ipts[0])).collect();
    let diffs_r: Vec<RatVec> = diffs.iter().map(|d| to_rat(d)).collect();
    let (_, pivots) = rref(&diffs_r, n);
    let r = pivots.len();
    let direction_perp = conormal_lattice(&diffs, n);
    if r == 0 {
        return Hull { rank: 0, direction_perp, facets: Vec::new(), vertices: pts, volume: Rational::zero() };
    }
    let proj: Vec<IntVec> = ipts.iter().map(|p| pivots.iter().map(|&c| p[c].clone()).collect()).collect();
    let pad = |a: &[BigInt]| -> IntVec {
        let mut v = vec![BigInt::zero(); n];
        for (&c, x) in pivots.iter().zip(a) {
            v[c] = x.clone();
        }
        v
    };
    let den_r = Rational::from_integer(den.clone());
    let (raw_facets, simplices, apex): (Vec<(IntVec, BigInt)>, Vec<Vec<usize>>, Option<usize>) = if r == 1 {
        let lo = (0..proj.len()).min_by(|&a, &b| proj[a][0].cmp(&proj[b][0])).unwrap();
        let hi = (0..proj.len()).max_by(|&a, &b| proj[a][0].cmp(&proj[b][0])).unwrap();
        (
            vec![(vec![-BigInt::one()], -proj[lo][0].clone()), (vec![BigInt::one()], proj[hi][0].clone())],
            vec![vec![lo], vec![hi]],
            Some(lo),
        )
    } else {
        let (simp, planes, apex) = quickhull(&proj, r);
        (planes, simp, Some(apex))
    };
    let mut merged: BTreeMap<IntVec, BigInt> = BTreeMap::new();
    for (a, b) in raw_facets {
        merged.insert(a, b);
    }
    let facets: Vec<HullFacet> = merged
        .iter()
        .map(|(a, b)| HullFacet { normal: pad(a), offset: Rational::from_integer(b.clone()) / &den_r })
        .collect();
    let vertices: Vec<RatVec> = (0..proj.len())
        .filter(|&i| {
            let tight: Vec<IntVec> = merged
                .iter()
                .filter(|(a, b)| dot_int(a, &proj[i]) == **b)
                .map(|(a, _)| a.clone())
                .collect();
            crate::exactalg::rank_int(&tight, r) == r
        })
        .map(|i| pts[i].clone())
        .collect();
    let volume = if r == n {
        let apex = apex.unwrap();
        let mut total = BigInt::zero();
        for s in &simplices {
            let m: Vec<IntVec> = s.iter().map(|&v| sub(&proj[v], &proj[apex])).collect();
            total += det_int(&m).abs();
        }
        Rational::new(total, factorial(n) * num_traits::pow(den.clone(), n))
    } else {
        Rational::zero()
    };
    Hull { rank: r, direction_perp, facets, vertices, volume }
}
