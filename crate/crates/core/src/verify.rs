//! Identity checks between independent computations, a worked
//! self-intersection fixture and a seeded polytope generator.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cpl::{as_codim0_cycle, linear_combine, product, support_function, ConewisePoly};
use crate::error::{Error, Result};
use crate::exactalg::{format_rational, int, ivec, rat, IntVec, MultiPoly, RatVec, Rational};
use crate::fan::Cone;
use crate::json::WeightedFanJson;
use crate::polytope::{convex_hull, mixed_volume_polarization, Polytope};
use crate::tropical::{
    add, corner_locus, mixed_volume_from_product, point_weight, reduce_on, restrict, stable_intersection, Subspace,
    WeightedCone, WeightedFan,
};

/// A compared quantity: an exact scalar, a normalized weighted fan, or a list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ReportValue {
    #[serde(with = "crate::exactalg::serde_rat")]
    Scalar(Rational),
    Fan(WeightedFanJson),
    List(Vec<ReportValue>),
}

impl ReportValue {
    /// The normal form of `w` with the grading pinned, so empty fans of any
    /// recorded degree compare equal.
    pub fn fan(w: &WeightedFan, degree: u32) -> ReportValue {
        let mut j = WeightedFanJson::from(&w.normalize());
        j.degree = degree;
        ReportValue::Fan(j)
    }

    fn difference(&self, other: &ReportValue) -> Result<ReportValue> {
        Ok(match (self, other) {
            (ReportValue::Scalar(a), ReportValue::Scalar(b)) => ReportValue::Scalar(a - b),
            (ReportValue::Fan(a), ReportValue::Fan(b)) => {
                let a = WeightedFan::try_from(a)?;
                let b = WeightedFan::try_from(b)?;
                ReportValue::fan(&a.concat(&b.neg())?, a.degree())
            }
            (ReportValue::List(a), ReportValue::List(b)) if a.len() == b.len() => {
                ReportValue::List(a.iter().zip(b).map(|(x, y)| x.difference(y)).collect::<Result<_>>()?)
            }
            _ => return Err(Error::InvalidParameter("incomparable report values".into())),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub instance: String,
    pub left: ReportValue,
    pub right: ReportValue,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<ReportValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    pub fn new(identity: &str, instance: String, left: ReportValue, right: ReportValue) -> Result<Self> {
        let pass = left == right;
        let discrepancy = if pass { None } else { Some(left.difference(&right)?) };
        Ok(VerificationReport { identity: identity.into(), instance, left, right, pass, discrepancy, note: None })
    }

    fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Whether the pass flag agrees with the recorded payload.
    pub fn is_consistent(&self) -> bool {
        self.pass == (self.left == self.right)
    }
}

fn describe(ps: &[Polytope]) -> String {
    let parts: Vec<String> = ps
        .iter()
        .map(|p| {
            let vs: Vec<String> = p
                .vertices()
                .iter()
                .map(|v| format!("({})", v.iter().map(format_rational).collect::<Vec<_>>().join(",")))
                .collect();
            format!("[{}]", vs.join(" "))
        })
        .collect();
    parts.join(" ; ")
}

fn check_same_dim(ps: &[Polytope]) -> Result<usize> {
    let n = ps.first().ok_or(Error::EmptyInput)?.dim();
    match ps.iter().find(|p| p.dim() != n) {
        Some(p) => Err(Error::DimensionMismatch { expected: n, found: p.dim() }),
        None => Ok(n),
    }
}

fn hull_of_union(ps: &[Polytope]) -> Result<Polytope> {
    let pts: Vec<RatVec> = ps.iter().flat_map(|p| p.vertices().iter().cloned()).collect();
    convex_hull(&pts)
}

/// Mixed volume of `counts[i]` copies of `ps[i]`.
fn mv_counts(ps: &[(&Polytope, usize)]) -> Result<Rational> {
    let list: Vec<Polytope> = ps.iter().flat_map(|(p, k)| std::iter::repeat_n((*p).clone(), *k)).collect();
    mixed_volume_polarization(&list)
}

/// `(2^n - 2) S^n` against `sum_i 2^i (S1^{n-i} S^i + S^{n-i} S2^i - S1^{n-i} S2^i)`
/// with `S` the hull of `S1` and `S2`; in the plane also
/// `V(S,S) - V(S,S1) - V(S,S2) + V(S1,S2) = 0`.
pub fn verify_gusev(s1: &Polytope, s2: &Polytope) -> Result<VerificationReport> {
    let n = check_same_dim(&[s1.clone(), s2.clone()])?;
    let s = hull_of_union(&[s1.clone(), s2.clone()])?;
    let left = Rational::from_integer((BigInt::one() << n) - 2) * mv_counts(&[(&s, n)])?;
    let mut right = Rational::zero();
    for i in 1..n {
        let t = mv_counts(&[(s1, n - i), (&s, i)])? + mv_counts(&[(&s, n - i), (s2, i)])?
            - mv_counts(&[(s1, n - i), (s2, i)])?;
        right += Rational::from_integer(BigInt::one() << i) * t;
    }
    let (left, right) = if n == 2 {
        let sp = mv_counts(&[(&s, 2)])? - mv_counts(&[(&s, 1), (s1, 1)])? - mv_counts(&[(&s, 1), (s2, 1)])?
            + mv_counts(&[(s1, 1), (s2, 1)])?;
        (
            ReportValue::List(vec![ReportValue::Scalar(left), ReportValue::Scalar(sp)]),
            ReportValue::List(vec![ReportValue::Scalar(right), ReportValue::Scalar(Rational::zero())]),
        )
    } else {
        (ReportValue::Scalar(left), ReportValue::Scalar(right))
    };
    Ok(VerificationReport::new("gusev", describe(&[s1.clone(), s2.clone()]), left, right)?
        .with_note("mixed volumes normalized so that V(A,..,A) = n! Vol(A); the identity is homogeneous"))
}

/// `(B - B_1)...(B - B_n) = 0` for `B` the hull of the union, both as a
/// signed sum of `2^n` mixed volumes and through the product of support
/// function differences.
pub fn verify_union_identity(bs: &[Polytope]) -> Result<VerificationReport> {
    let n = check_same_dim(bs)?;
    if bs.len() != n {
        return Err(Error::CountMismatch { expected: n, found: bs.len() });
    }
    let b = hull_of_union(bs)?;
    let mut signed = Rational::zero();
    for mask in 0usize..(1 << n) {
        let list: Vec<Polytope> = (0..n).map(|i| if mask >> i & 1 == 1 { bs[i].clone() } else { b.clone() }).collect();
        let v = mixed_volume_polarization(&list)?;
        if mask.count_ones() % 2 == 0 {
            signed += v;
        } else {
            signed -= v;
        }
    }
    let hb = support_function(&b);
    let diffs: Vec<ConewisePoly> = bs
        .iter()
        .map(|bi| linear_combine(&[hb.clone(), support_function(bi)], &[int(1), int(-1)]))
        .collect::<Result<_>>()?;
    let via_product = mixed_volume_from_product(&product(&diffs)?)?;
    VerificationReport::new(
        "union",
        describe(bs),
        ReportValue::List(vec![ReportValue::Scalar(signed), ReportValue::Scalar(via_product)]),
        ReportValue::List(vec![ReportValue::Scalar(Rational::zero()), ReportValue::Scalar(Rational::zero())]),
    )
}

/// The corner locus of the support function of `a`.
pub fn support_corner_locus(a: &Polytope) -> Result<WeightedFan> {
    corner_locus(&as_codim0_cycle(&support_function(a))?)
}

/// Stable intersection number of the corner loci of the support functions.
pub fn corner_loci_intersection<R: Rng + ?Sized>(r#as: &[Polytope], rng: &mut R) -> Result<Rational> {
    let n = check_same_dim(r#as)?;
    if r#as.len() != n {
        return Err(Error::CountMismatch { expected: n, found: r#as.len() });
    }
    let mut acc = support_corner_locus(&r#as[0])?;
    for a in &r#as[1..] {
        acc = stable_intersection(&acc, &support_corner_locus(a)?, rng)?;
    }
    point_weight(&acc)
}

/// The intersection number of the corner loci against the mixed volume.
pub fn verify_bernstein<R: Rng + ?Sized>(r#as: &[Polytope], rng: &mut R) -> Result<VerificationReport> {
    let left = corner_loci_intersection(r#as, rng)?;
    let right = mixed_volume_polarization(r#as)?;
    VerificationReport::new("bernstein", describe(r#as), ReportValue::Scalar(left), ReportValue::Scalar(right))
}

/// Compares two tuples with equal products of support functions up to
/// linear terms: the tuple `as2` is `as1` with polytope `i` scaled by
/// `scales[i]` (product one) and translated by `shifts[i]`.
pub fn verify_equal_products<R: Rng + ?Sized>(
    as1: &[Polytope],
    scales: &[Rational],
    shifts: &[RatVec],
    rng: &mut R,
) -> Result<VerificationReport> {
    let n = check_same_dim(as1)?;
    if scales.len() != as1.len() || shifts.len() != as1.len() {
        return Err(Error::CountMismatch { expected: as1.len(), found: scales.len().min(shifts.len()) });
    }
    if scales.iter().fold(Rational::one(), |acc, c| acc * c) != Rational::one() || scales.iter().any(Zero::is_zero) {
        return Err(Error::InvalidParameter("scales must be nonzero with product one".into()));
    }
    let scaled: Vec<Polytope> = as1.iter().zip(scales).map(|(a, c)| a.scale(c)).collect();
    let as2: Vec<Polytope> = scaled.iter().zip(shifts).map(|(a, t)| a.translate(t)).collect();
    let p1 = product(&as1.iter().map(support_function).collect::<Vec<_>>())?;
    let ps = product(&scaled.iter().map(support_function).collect::<Vec<_>>())?;
    let d = linear_combine(&[p1.clone(), ps], &[int(1), int(-1)])?;
    let exact_equal = d.pieces().iter().all(MultiPoly::is_zero);
    let p2 = product(&as2.iter().map(support_function).collect::<Vec<_>>())?;
    let left = vec![
        ReportValue::Scalar(corner_loci_intersection(as1, rng)?),
        ReportValue::Scalar(mixed_volume_from_product(&p1)?),
    ];
    let right = vec![
        ReportValue::Scalar(corner_loci_intersection(&as2, rng)?),
        ReportValue::Scalar(mixed_volume_from_product(&p2)?),
    ];
    let mut report =
        VerificationReport::new("equal-products", describe(as1), ReportValue::List(left), ReportValue::List(right))?;
    if !exact_equal {
        report.pass = false;
        report.note = Some(format!("support products before translation differ in dimension {n}"));
    }
    Ok(report)
}

/// Stable product, or the empty class when the codimensions exceed the
/// dimension.
fn times<R: Rng + ?Sized>(a: &WeightedFan, b: &WeightedFan, rng: &mut R) -> Result<WeightedFan> {
    let n = a.ambient();
    let (k, d) = (a.codim() + b.codim(), a.degree() + b.degree());
    if k > n || a.is_empty() || b.is_empty() {
        return Ok(WeightedFan::empty(n, k.min(n), d));
    }
    stable_intersection(a, b, rng)
}

/// `delta(F G) = delta F G + F delta G` and `delta(F|L) = (delta F)|L`, each
/// side computed independently.
pub fn verify_differential_identities<R: Rng + ?Sized>(
    f: &WeightedFan,
    g: &WeightedFan,
    l: &Subspace,
    rng: &mut R,
) -> Result<VerificationReport> {
    let n = f.ambient();
    if g.ambient() != n {
        return Err(Error::DimensionMismatch { expected: n, found: g.ambient() });
    }
    let deg = (f.degree() + g.degree()).saturating_sub(1);
    let (lhs, rhs) = if f.codim() + g.codim() < n {
        let lhs = corner_locus(&times(f, g, rng)?)?;
        let t1 = times(&corner_locus(f)?, g, rng)?;
        let t2 = times(f, &corner_locus(g)?, rng)?;
        (lhs, add(&t1, &t2)?)
    } else {
        let e = WeightedFan::empty(n, n, deg);
        (e.clone(), e)
    };
    let fdeg = f.degree().saturating_sub(1);
    let restricted_delta = if f.codim() < l.dim() {
        corner_locus(&restrict(f, l, rng)?)?
    } else {
        WeightedFan::empty(l.dim(), l.dim(), fdeg)
    };
    let delta_restricted = {
        let df = corner_locus(f)?;
        if df.codim() <= l.dim() && !df.is_empty() {
            restrict(&df, l, rng)?
        } else {
            WeightedFan::empty(l.dim(), df.codim().min(l.dim()), fdeg)
        }
    };
    VerificationReport::new(
        "differential",
        format!(
            "F: bidegree ({}, {}), {} cones; G: bidegree ({}, {}), {} cones; L of dimension {}",
            f.codim(),
            f.degree(),
            f.cones().len(),
            g.codim(),
            g.degree(),
            g.cones().len(),
            l.dim()
        ),
        ReportValue::List(vec![ReportValue::fan(&lhs, deg), ReportValue::fan(&restricted_delta, fdeg)]),
        ReportValue::List(vec![ReportValue::fan(&rhs, deg), ReportValue::fan(&delta_restricted, fdeg)]),
    )
}

/// Rays `(-1,0,0), (0,-1,0), (0,0,-1), (1,1,1), (-1,-1,0), (1,1,0)`.
fn plane_rays() -> [IntVec; 6] {
    [ivec(&[-1, 0, 0]), ivec(&[0, -1, 0]), ivec(&[0, 0, -1]), ivec(&[1, 1, 1]), ivec(&[-1, -1, 0]), ivec(&[1, 1, 0])]
}

/// The components of the tropical plane `max(0,x,y,z)` cut by `x = y`, as
/// pairs of ray indices into [`plane_rays`], with the linear form of `g` on
/// each. The values of `g` at the six rays are `1, 0, 0, 0, 0, -1`; each form
/// is the unique one on the span of its component matching them.
fn plane_components() -> Vec<((usize, usize), RatVec)> {
    let h = rat(1, 2);
    vec![
        ((0, 4), vec![int(-1), int(1), int(0)]),
        ((4, 1), vec![int(0), int(0), int(0)]),
        ((2, 5), vec![-h.clone(), -h.clone(), int(0)]),
        ((5, 3), vec![-h.clone(), -h, int(1)]),
        ((0, 2), vec![int(-1), int(0), int(0)]),
        ((0, 3), vec![int(-1), int(1), int(0)]),
        ((1, 2), vec![int(0), int(0), int(0)]),
        ((1, 3), vec![int(0), int(0), int(0)]),
    ]
}

/// Intermediate and final data of the plane fixture.
#[derive(Clone, Debug)]
pub struct PlaneExample {
    /// `delta(g^2 F)`.
    pub intermediate: WeightedFan,
    /// `delta^2(g^2 F) / 2` read as a number.
    pub value: Rational,
}

/// The plane fixture with `g` replaced by `g + shift`.
pub fn plane_example(shift: &[Rational]) -> Result<PlaneExample> {
    if shift.len() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: shift.len() });
    }
    let e = |i: usize| (0..3).map(|j| if i == j { int(1) } else { int(0) }).collect::<RatVec>();
    let forms = [vec![int(0), int(0), int(0)], e(0), e(1), e(2)];
    let f = corner_locus(&as_codim0_cycle(&ConewisePoly::max_of_linear_forms(&forms)?)?)?;
    if f.cones().len() != 6 {
        return Err(Error::InvalidParameter(format!("tropical plane has {} cones, expected 6", f.cones().len())));
    }
    let rays = plane_rays();
    let mut cones = Vec::new();
    for ((i, j), form) in plane_components() {
        let cone = Cone::from_generators(3, &[rays[i].clone(), rays[j].clone()], &[]);
        let x = cone.relint_point();
        let parent = f
            .cones()
            .iter()
            .find(|wc| wc.cone.contains(&x))
            .ok_or_else(|| Error::InvalidParameter(format!("component {cone} not on the plane")))?;
        let g = MultiPoly::linear(&form.iter().zip(shift).map(|(a, b)| a + b).collect::<Vec<_>>());
        let weight = &parent.weight * &g.pow(2);
        cones.push(WeightedCone::new(cone, parent.frame.clone(), weight));
    }
    let g2f = WeightedFan::new(3, 1, 2, cones)?;
    let intermediate = corner_locus(&g2f)?;
    let top = corner_locus(&intermediate)?;
    let value = point_weight(&top)? / int(2);
    Ok(PlaneExample { intermediate, value })
}

/// The expected `delta(g^2 F)` for the unshifted fixture: the ray `(1,1,0)`
/// with weight `-2x`.
pub fn plane_expected_intermediate() -> Result<WeightedFan> {
    let cone = Cone::from_generators(3, &[ivec(&[1, 1, 0])], &[]);
    let w = reduce_on(&cone, &MultiPoly::linear(&[int(-2), int(0), int(0)]));
    let frame = cone.conormal().to_vec();
    Ok(WeightedFan::new(3, 2, 1, vec![WeightedCone::new(cone, frame, w)])?.normalize())
}

/// Self-intersection number of a classical line in the tropical plane;
/// fails if the intermediate corner locus deviates from the expected ray.
pub fn tropical_plane_self_intersection() -> Result<Rational> {
    let ex = plane_example(&[int(0), int(0), int(0)])?;
    let expected = plane_expected_intermediate()?;
    if ex.intermediate.normalize() != expected {
        return Err(Error::InvalidParameter(format!(
            "intermediate corner locus {:?} differs from the ray (1,1,0) with weight -2x",
            WeightedFanJson::from(&ex.intermediate.normalize())
        )));
    }
    Ok(ex.value)
}

/// Hull of `nverts` seeded random points with coordinates `p/q`,
/// `|p| <= 8`, `1 <= q <= 4`.
pub fn random_polytope(dim: usize, nverts: usize, seed: u64) -> Result<Polytope> {
    if dim < 1 || nverts < 1 {
        return Err(Error::InvalidParameter(format!("dim {dim} and nverts {nverts} must be positive")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<RatVec> = (0..nverts)
        .map(|_| (0..dim).map(|_| rat(rng.gen_range(-8..=8), rng.gen_range(1..=4))).collect())
        .collect();
    convex_hull(&pts)
}
