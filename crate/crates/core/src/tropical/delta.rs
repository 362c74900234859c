use std::collections::BTreeMap;

use super::{orientation, overlay, rat_rows, reduce_on, WeightedCone, WeightedFan};
use crate::error::{Error, Result};
use crate::exactalg::form::wedge_covectors;
use crate::exactalg::{extract_conormal_multiple, wedge, ExtForm, IntVec, MultiPoly};
use crate::fan::{Cone, ConeKey};

/// A stable-boundary face where the adjacent weights do not cancel.
#[derive(Clone, Debug, PartialEq)]
pub struct BalanceViolation {
    pub face: Cone,
    pub residual: ExtForm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BalanceReport {
    pub pass: bool,
    pub violations: Vec<BalanceViolation>,
}

fn frame_form(n: usize, frame: &[IntVec]) -> Result<ExtForm> {
    wedge_covectors(n, n, &rat_rows(frame))
}

/// Sign relating the boundary coorientation `a ^ frame(Q)` to the
/// canonical frame of the facet.
fn boundary_sign(a: &IntVec, q: &WeightedCone, facet: &Cone) -> i32 {
    let mut beta = vec![a.clone()];
    beta.extend(q.frame.iter().cloned());
    orientation(&beta, facet.conormal())
}

/// Sums per-cone contributions at each facet. Identical facets are grouped
/// directly when cones meet along faces; otherwise facets spanning one space
/// are overlaid first. Coefficients are reduced on the facet span.
fn facet_sums(
    w: &WeightedFan,
    mut contrib: impl FnMut(&WeightedCone, &IntVec, &Cone) -> Result<ExtForm>,
) -> Result<Vec<(Cone, ExtForm)>> {
    let mut items: Vec<(Cone, ExtForm)> = Vec::new();
    for wc in w.cones() {
        for (a, r) in wc.cone.facet_cones() {
            let f = contrib(wc, &a, &r)?;
            items.push((r, f));
        }
    }
    let mut sums: Vec<(Cone, ExtForm)> = Vec::new();
    if w.is_face_compatible() {
        let mut acc: BTreeMap<ConeKey, (Cone, ExtForm)> = BTreeMap::new();
        for (r, f) in items {
            match acc.get_mut(&r.key()) {
                Some(e) => e.1 = e.1.add(&f)?,
                None => {
                    acc.insert(r.key(), (r, f));
                }
            }
        }
        sums.extend(acc.into_values());
    } else {
        let mut groups: BTreeMap<Vec<IntVec>, Vec<(Cone, ExtForm)>> = BTreeMap::new();
        for (r, f) in items {
            groups.entry(r.conormal().to_vec()).or_default().push((r, f));
        }
        for list in groups.values() {
            let refs: Vec<&Cone> = list.iter().map(|(c, _)| c).collect();
            for (chamber, idx) in overlay(&refs) {
                let mut total = list[idx[0]].1.clone();
                for &i in &idx[1..] {
                    total = total.add(&list[i].1)?;
                }
                sums.push((chamber, total));
            }
        }
    }
    Ok(sums
        .into_iter()
        .map(|(r, f)| {
            let g = f.map_coefficients(|p| reduce_on(&r, p));
            (r, g)
        })
        .collect())
}

/// Checks that at every facet of the support the signed boundary values of
/// the adjacent weights cancel.
pub fn is_balanced(w: &WeightedFan) -> BalanceReport {
    let n = w.ambient();
    let sums = facet_sums(w, |wc, a, r| {
        let s = boundary_sign(a, wc, r);
        let base = frame_form(n, &wc.frame)?;
        let q = if s < 0 { -&wc.weight } else { wc.weight.clone() };
        Ok(base.scale(&q))
    })
    .expect("canonical frames have matching dimensions");
    let violations: Vec<BalanceViolation> = sums
        .into_iter()
        .filter(|(_, f)| !f.is_zero())
        .map(|(face, residual)| BalanceViolation { face, residual })
        .collect();
    BalanceReport { pass: violations.is_empty(), violations }
}

fn differential(q: &MultiPoly) -> ExtForm {
    let n = q.nvars();
    let mut df = ExtForm::zero(n, n, 1);
    for i in 0..n {
        let term = ExtForm::dx(n, n, i).scale(&q.partial(i));
        df = df.add(&term).expect("same shape");
    }
    df
}

/// The corner locus: bidegree `(k, d)` goes to `(k + 1, d - 1)`.
pub fn corner_locus(w: &WeightedFan) -> Result<WeightedFan> {
    let n = w.ambient();
    let k = w.codim();
    if w.degree() == 0 || k == n || w.is_empty() {
        return Ok(WeightedFan::empty(n, (k + 1).min(n), w.degree().saturating_sub(1)));
    }
    let mut cache: BTreeMap<ConeKey, ExtForm> = BTreeMap::new();
    let sums = facet_sums(w, |wc, a, r| {
        let base = match cache.get(&wc.cone.key()) {
            Some(f) => f.clone(),
            None => {
                let f = wedge(&differential(&wc.weight), &frame_form(n, &wc.frame)?)?;
                cache.insert(wc.cone.key(), f.clone());
                f
            }
        };
        Ok(if boundary_sign(a, wc, r) < 0 { base.neg() } else { base })
    })?;
    let mut cones = Vec::new();
    for (r, f) in sums {
        if f.is_zero() {
            continue;
        }
        let q = extract_conormal_multiple(&f, &rat_rows(r.conormal()))
            .map_err(|e| match e {
                Error::NotDecomposable(s) => Error::NotDecomposable(format!("at {r}: {s}")),
                other => other,
            })?;
        let q = reduce_on(&r, &q);
        if !q.is_zero() {
            let frame = r.conormal().to_vec();
            cones.push(WeightedCone { cone: r, frame, weight: q });
        }
    }
    let out = WeightedFan::empty(n, k + 1, w.degree() - 1).with_cones(cones, w.is_face_compatible());
    Ok(out.tidy())
}
