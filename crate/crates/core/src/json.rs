//! JSON forms of fans, conewise polynomials and weighted fans. Every number
//! is an exact rational string `"p/q"`; integers may also be given bare.

use serde::{Deserialize, Serialize};

use crate::cpl::ConewisePoly;
use crate::error::{Error, Result};
use crate::exactalg::{primitive, to_rat, IntVec, MultiPoly, RatVec, Rational};
use crate::fan::{Cone, Fan};
use crate::tropical::{WeightedCone, WeightedFan};

/// A monomial `[[a1..an], "p/q"]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u32>, #[serde(with = "crate::exactalg::serde_rat")] pub Rational);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub monomials: Vec<Monomial>,
}

impl From<&MultiPoly> for PolyJson {
    fn from(p: &MultiPoly) -> Self {
        PolyJson { monomials: p.terms().map(|(e, c)| Monomial(e.0.clone(), c.clone())).collect() }
    }
}

impl PolyJson {
    pub fn to_poly(&self, nvars: usize) -> Result<MultiPoly> {
        if let Some(m) = self.monomials.iter().find(|m| m.0.len() != nvars) {
            return Err(Error::DimensionMismatch { expected: nvars, found: m.0.len() });
        }
        Ok(MultiPoly::from_terms(nvars, self.monomials.iter().map(|m| (m.0.clone(), m.1.clone()))))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeJson {
    #[serde(with = "crate::exactalg::serde_rat::mat")]
    pub rays: Vec<RatVec>,
    #[serde(default, with = "crate::exactalg::serde_rat::mat")]
    pub lineality: Vec<RatVec>,
}

impl From<&Cone> for ConeJson {
    fn from(c: &Cone) -> Self {
        ConeJson {
            rays: c.rays().iter().map(|r| to_rat(r)).collect(),
            lineality: c.lineality().iter().map(|r| to_rat(r)).collect(),
        }
    }
}

fn check_rows(rows: &[RatVec], n: usize) -> Result<()> {
    match rows.iter().find(|r| r.len() != n) {
        Some(r) => Err(Error::DimensionMismatch { expected: n, found: r.len() }),
        None => Ok(()),
    }
}

impl ConeJson {
    pub fn to_cone(&self, n: usize) -> Result<Cone> {
        check_rows(&self.rays, n)?;
        check_rows(&self.lineality, n)?;
        Ok(Cone::from_rational_generators(n, &self.rays, &self.lineality))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanJson {
    pub dim: usize,
    pub cones: Vec<ConeJson>,
}

impl From<&Fan> for FanJson {
    fn from(f: &Fan) -> Self {
        FanJson { dim: f.ambient(), cones: f.cones().iter().map(ConeJson::from).collect() }
    }
}

impl TryFrom<&FanJson> for Fan {
    type Error = Error;
    fn try_from(j: &FanJson) -> Result<Fan> {
        let cones = j.cones.iter().map(|c| c.to_cone(j.dim)).collect::<Result<Vec<_>>>()?;
        Fan::new(j.dim, cones)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyConeJson {
    #[serde(with = "crate::exactalg::serde_rat::mat")]
    pub rays: Vec<RatVec>,
    #[serde(default, with = "crate::exactalg::serde_rat::mat")]
    pub lineality: Vec<RatVec>,
    pub monomials: Vec<Monomial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConewisePolyJson {
    pub dim: usize,
    pub cones: Vec<PolyConeJson>,
}

impl From<&ConewisePoly> for ConewisePolyJson {
    fn from(f: &ConewisePoly) -> Self {
        let cones = f
            .fan()
            .cones()
            .iter()
            .zip(f.pieces())
            .map(|(c, p)| {
                let cj = ConeJson::from(c);
                PolyConeJson { rays: cj.rays, lineality: cj.lineality, monomials: PolyJson::from(p).monomials }
            })
            .collect();
        ConewisePolyJson { dim: f.ambient(), cones }
    }
}

impl TryFrom<&ConewisePolyJson> for ConewisePoly {
    type Error = Error;
    fn try_from(j: &ConewisePolyJson) -> Result<ConewisePoly> {
        let n = j.dim;
        let mut cones = Vec::with_capacity(j.cones.len());
        let mut pieces = Vec::with_capacity(j.cones.len());
        for c in &j.cones {
            cones.push(ConeJson { rays: c.rays.clone(), lineality: c.lineality.clone() }.to_cone(n)?);
            pieces.push(PolyJson { monomials: c.monomials.clone() }.to_poly(n)?);
        }
        ConewisePoly::new(Fan::new(n, cones)?, pieces)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedConeJson {
    #[serde(with = "crate::exactalg::serde_rat::mat")]
    pub rays: Vec<RatVec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty", with = "crate::exactalg::serde_rat::mat")]
    pub lineality: Vec<RatVec>,
    #[serde(with = "crate::exactalg::serde_rat::mat")]
    pub frame: Vec<RatVec>,
    pub weight: PolyJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedFanJson {
    pub dim: usize,
    pub codim: usize,
    pub degree: u32,
    pub cones: Vec<WeightedConeJson>,
}

impl From<&WeightedFan> for WeightedFanJson {
    fn from(w: &WeightedFan) -> Self {
        let cones = w
            .cones()
            .iter()
            .map(|wc| {
                let cj = ConeJson::from(&wc.cone);
                WeightedConeJson {
                    rays: cj.rays,
                    lineality: cj.lineality,
                    frame: wc.frame.iter().map(|f| to_rat(f)).collect(),
                    weight: PolyJson::from(&wc.weight),
                }
            })
            .collect();
        WeightedFanJson { dim: w.ambient(), codim: w.codim(), degree: w.degree(), cones }
    }
}

impl TryFrom<&WeightedFanJson> for WeightedFan {
    type Error = Error;
    fn try_from(j: &WeightedFanJson) -> Result<WeightedFan> {
        let n = j.dim;
        let mut cones = Vec::with_capacity(j.cones.len());
        for c in &j.cones {
            let cone = ConeJson { rays: c.rays.clone(), lineality: c.lineality.clone() }.to_cone(n)?;
            check_rows(&c.frame, n)?;
            let frame: Vec<IntVec> = c.frame.iter().map(|f| primitive(f)).collect();
            cones.push(WeightedCone::new(cone, frame, c.weight.to_poly(n)?));
        }
        WeightedFan::new(n, j.codim, j.degree, cones)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpl::{as_codim0_cycle, support_function};
    use crate::exactalg::rvec;
    use crate::polytope::convex_hull;
    use crate::tropical::corner_locus;

    #[test]
    fn weighted_fan_round_trip() {
        let sq = convex_hull(&[rvec(&[0, 0]), rvec(&[1, 0]), rvec(&[0, 1]), rvec(&[1, 1])]).unwrap();
        let f = support_function(&sq);
        let w = corner_locus(&as_codim0_cycle(&f).unwrap()).unwrap();
        let j = WeightedFanJson::from(&w);
        let s = serde_json::to_string(&j).unwrap();
        let back: WeightedFanJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back, j);
        assert_eq!(WeightedFan::try_from(&back).unwrap().normalize(), w.normalize());

        let cj = ConewisePolyJson::from(&f);
        let back: ConewisePolyJson = serde_json::from_str(&serde_json::to_string(&cj).unwrap()).unwrap();
        assert_eq!(ConewisePolyJson::from(&ConewisePoly::try_from(&back).unwrap()), cj);
    }

    #[test]
    fn bare_integers_accepted() {
        let j: FanJson = serde_json::from_str(r#"{"dim":2,"cones":[{"rays":[[1,0],["0","1"]]}]}"#).unwrap();
        let f = Fan::try_from(&j).unwrap();
        assert_eq!(f.cones()[0].rays().len(), 2);
        let bad: FanJson = serde_json::from_str(r#"{"dim":3,"cones":[{"rays":[[1,0]]}]}"#).unwrap();
        assert!(Fan::try_from(&bad).is_err());
    }
}
