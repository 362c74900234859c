//! Continuous conewise-polynomial functions on complete fans.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactalg::poly::reduce_with_equations;
use crate::exactalg::{to_rat, MultiPoly, RatVec, Rational};
use crate::fan::{common_refinement_with_parents, locate_cone, Cone, ConeKey, Fan};
use crate::polytope::{convex_hull, normal_fan, Polytope};
use crate::tropical::{WeightedCone, WeightedFan};

/// A polynomial piece on each maximal cone of a complete fan.
#[derive(Clone, Debug, PartialEq)]
pub struct ConewisePoly {
    fan: Fan,
    pieces: Vec<MultiPoly>,
}

/// A wall where neighbouring pieces disagree.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuityViolation {
    pub wall: Cone,
    pub left: MultiPoly,
    pub right: MultiPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuityReport {
    pub pass: bool,
    pub violations: Vec<ContinuityViolation>,
}

impl ConewisePoly {
    pub fn new(fan: Fan, pieces: Vec<MultiPoly>) -> Result<ConewisePoly> {
        if fan.cones().len() != pieces.len() {
            return Err(Error::CountMismatch { expected: fan.cones().len(), found: pieces.len() });
        }
        let n = fan.ambient();
        if let Some(p) = pieces.iter().find(|p| p.nvars() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: p.nvars() });
        }
        Ok(ConewisePoly { fan, pieces })
    }

    /// A single polynomial on the whole space.
    pub fn global(p: MultiPoly) -> ConewisePoly {
        ConewisePoly { fan: Fan::trivial(p.nvars()), pieces: vec![p] }
    }

    pub fn constant(n: usize, c: Rational) -> ConewisePoly {
        ConewisePoly::global(MultiPoly::constant(n, c))
    }

    /// `max` of finitely many linear forms, i.e. the support function of
    /// their convex hull.
    pub fn max_of_linear_forms(forms: &[RatVec]) -> Result<ConewisePoly> {
        Ok(support_function(&convex_hull(forms)?))
    }

    pub fn ambient(&self) -> usize {
        self.fan.ambient()
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn pieces(&self) -> &[MultiPoly] {
        &self.pieces
    }

    /// Largest total degree among the pieces.
    pub fn degree(&self) -> u32 {
        self.pieces.iter().filter_map(MultiPoly::degree).max().unwrap_or(0)
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.pieces.iter().all(|p| p.is_homogeneous_of(d))
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        let loc = locate_cone(&self.fan, x)?;
        Ok(self.pieces[loc.containing[0]].eval(x))
    }

    /// Same function on a refinement of the fan.
    pub fn refine_to(&self, fine: &Fan) -> Result<ConewisePoly> {
        let pieces = fine
            .cones()
            .iter()
            .map(|c| {
                let x = c.relint_point();
                let loc = locate_cone(&self.fan, &x)?;
                Ok(self.pieces[loc.containing[0]].clone())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ConewisePoly { fan: fine.clone(), pieces })
    }

    pub fn scale(&self, c: &Rational) -> ConewisePoly {
        ConewisePoly { fan: self.fan.clone(), pieces: self.pieces.iter().map(|p| p.scale(c)).collect() }
    }

    /// Applies `f` piecewise.
    pub fn map_pieces(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> ConewisePoly {
        ConewisePoly { fan: self.fan.clone(), pieces: self.pieces.iter().map(f).collect() }
    }

    pub fn pow(&self, k: u32) -> ConewisePoly {
        self.map_pieces(|p| p.pow(k))
    }
}

/// Support function of a polytope on its normal fan.
pub fn support_function(a: &Polytope) -> ConewisePoly {
    let fan = normal_fan(a);
    let pieces = a.vertices().iter().map(|v| MultiPoly::linear(v)).collect();
    ConewisePoly { fan, pieces }
}

fn refine_pair<'a>(f: &'a ConewisePoly, g: &'a ConewisePoly) -> Result<(Fan, Vec<(&'a MultiPoly, &'a MultiPoly)>)> {
    if f.ambient() != g.ambient() {
        return Err(Error::DimensionMismatch { expected: f.ambient(), found: g.ambient() });
    }
    let (fine, parents) = common_refinement_with_parents(&f.fan, &g.fan)?;
    let pairs = parents.iter().map(|&(i, j)| (&f.pieces[i], &g.pieces[j])).collect();
    Ok((fine, pairs))
}

pub fn multiply(f: &ConewisePoly, g: &ConewisePoly) -> Result<ConewisePoly> {
    let (fan, pairs) = refine_pair(f, g)?;
    let pieces = pairs.into_iter().map(|(p, q)| p * q).collect();
    Ok(ConewisePoly { fan, pieces })
}

/// Product of several functions.
pub fn product(fs: &[ConewisePoly]) -> Result<ConewisePoly> {
    let Some(first) = fs.first() else {
        return Err(Error::EmptyInput);
    };
    fs[1..].iter().try_fold(first.clone(), |acc, f| multiply(&acc, f))
}

pub fn linear_combine(fs: &[ConewisePoly], cs: &[Rational]) -> Result<ConewisePoly> {
    if fs.len() != cs.len() {
        return Err(Error::CountMismatch { expected: fs.len(), found: cs.len() });
    }
    let Some(first) = fs.first() else {
        return Err(Error::EmptyInput);
    };
    let mut acc = first.scale(&cs[0]);
    for (f, c) in fs[1..].iter().zip(&cs[1..]) {
        let scaled = f.scale(c);
        let (fan, pairs) = refine_pair(&acc, &scaled)?;
        let pieces = pairs.into_iter().map(|(p, q)| p + q).collect();
        acc = ConewisePoly { fan, pieces };
    }
    Ok(acc)
}

/// Compares neighbouring pieces on every wall of the fan.
pub fn check_continuity(f: &ConewisePoly) -> ContinuityReport {
    let mut walls: BTreeMap<ConeKey, Vec<(usize, Cone)>> = BTreeMap::new();
    for (i, c) in f.fan.cones().iter().enumerate() {
        for (_, w) in c.facet_cones() {
            walls.entry(w.key()).or_default().push((i, w));
        }
    }
    let mut violations = Vec::new();
    for list in walls.values() {
        let wall = &list[0].1;
        let eqs: Vec<RatVec> = wall.conormal().iter().map(|v| to_rat(v)).collect();
        for k in 1..list.len() {
            let diff = &f.pieces[list[k].0] - &f.pieces[list[0].0];
            if !reduce_with_equations(&diff, &eqs).is_zero() {
                violations.push(ContinuityViolation {
                    wall: wall.clone(),
                    left: f.pieces[list[0].0].clone(),
                    right: f.pieces[list[k].0].clone(),
                });
            }
        }
    }
    ContinuityReport { pass: violations.is_empty(), violations }
}

/// The codimension-0 weighted fan carrying the pieces as weights.
pub fn as_codim0_cycle(f: &ConewisePoly) -> Result<WeightedFan> {
    let report = check_continuity(f);
    if let Some(v) = report.violations.first() {
        return Err(Error::ContinuityViolation(format!("pieces {} and {} differ on {}", v.left, v.right, v.wall)));
    }
    let d = f.degree();
    if !f.is_homogeneous_of(d) && !f.pieces.iter().all(MultiPoly::is_zero) {
        return Err(Error::GradingMismatch(format!("pieces are not homogeneous of degree {d}")));
    }
    let cones = f
        .fan
        .cones()
        .iter()
        .zip(&f.pieces)
        .map(|(c, p)| WeightedCone::new(c.clone(), Vec::new(), p.clone()))
        .collect();
    WeightedFan::from_compatible(f.ambient(), 0, d, cones)
}
