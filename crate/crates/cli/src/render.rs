//! SVG drawing of weighted fans in the plane.

use std::fmt::Write;

use trop_core::exactalg::{parse_rational, to_f64, IntVec, Rational};
use trop_core::{Error, WeightedFan};

/// Axis-parallel drawing window `[x0, x1] x [y0, y1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub x0: Rational,
    pub y0: Rational,
    pub x1: Rational,
    pub y1: Rational,
}

impl Window {
    pub fn parse(s: &str) -> Result<Window, Error> {
        let parts: Vec<Rational> = s.split(',').map(|p| parse_rational(p.trim())).collect::<Result<_, _>>()?;
        let [x0, y0, x1, y1] = <[Rational; 4]>::try_from(parts)
            .map_err(|_| Error::InvalidParameter(format!("window needs four numbers, got {s:?}")))?;
        if x0 >= x1 || y0 >= y1 {
            return Err(Error::InvalidParameter(format!("empty window {s:?}")));
        }
        Ok(Window { x0, y0, x1, y1 })
    }
}

impl Default for Window {
    fn default() -> Self {
        let r = |v: i64| Rational::from_integer(v.into());
        Window { x0: r(-5), y0: r(-5), x1: r(5), y1: r(5) }
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Parameter range of `{t d : t >= 0}` inside the window.
fn clip_ray(d: &[Rational], w: &Window) -> Option<(Rational, Rational)> {
    let zero = Rational::from_integer(0.into());
    let mut lo = zero.clone();
    let mut hi: Option<Rational> = None;
    for (di, (a, b)) in d.iter().zip([(&w.x0, &w.x1), (&w.y0, &w.y1)]) {
        if *di == zero {
            if *a > zero || *b < zero {
                return None;
            }
            continue;
        }
        let (s, t) = (a / di, b / di);
        let (s, t) = if s < t { (s, t) } else { (t, s) };
        lo = lo.max(s);
        hi = Some(match hi {
            Some(h) => h.min(t),
            None => t,
        });
    }
    match hi {
        Some(h) if lo < h => Some((lo, h)),
        None => Some((lo.clone(), lo + Rational::from_integer(1.into()))),
        _ => None,
    }
}

fn point(d: &[Rational], t: &Rational) -> (f64, f64) {
    (to_f64(&(&d[0] * t)), -to_f64(&(&d[1] * t)))
}

fn rat_dir(v: &IntVec) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

/// SVG document with one labelled segment per ray direction of each
/// one-dimensional cone; other cones get a label only.
pub fn render_svg(w: &WeightedFan, window: &Window) -> Result<String, Error> {
    if w.ambient() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: w.ambient() });
    }
    let (x0, y0, x1, y1) = (to_f64(&window.x0), to_f64(&window.y0), to_f64(&window.x1), to_f64(&window.y1));
    let (width, height) = (x1 - x0, y1 - y0);
    let unit = width.max(height);
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}">"#,
        num(x0),
        num(-y1),
        num(width),
        num(height)
    )
    .unwrap();
    writeln!(
        out,
        r#"<g class="fan" stroke="black" stroke-width="{}" font-size="{}" font-family="sans-serif">"#,
        num(unit / 200.0),
        num(unit / 30.0)
    )
    .unwrap();
    for wc in w.cones() {
        let label = escape(&wc.weight.to_string());
        let mut dirs: Vec<Vec<Rational>> = wc.cone.rays().iter().map(rat_dir).collect();
        for l in wc.cone.lineality() {
            let d = rat_dir(l);
            dirs.push(d.iter().map(|x| -x).collect());
            dirs.push(d);
        }
        match wc.cone.dim() {
            0 => {
                let z = Rational::from_integer(0.into());
                if window.x0 <= z && z <= window.x1 && window.y0 <= z && z <= window.y1 {
                    writeln!(out, r#"<circle cx="0.000000" cy="0.000000" r="{}"/>"#, num(unit / 100.0)).unwrap();
                    writeln!(out, r#"<text x="0.000000" y="0.000000" stroke="none">{label}</text>"#).unwrap();
                }
            }
            1 => {
                for d in &dirs {
                    let Some((t0, t1)) = clip_ray(d, window) else { continue };
                    let (a, b) = (point(d, &t0), point(d, &t1));
                    writeln!(
                        out,
                        r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                        num(a.0),
                        num(a.1),
                        num(b.0),
                        num(b.1)
                    )
                    .unwrap();
                    let m = point(d, &((t0 + t1) * Rational::new(3.into(), 8.into())));
                    writeln!(out, r#"<text x="{}" y="{}" stroke="none">{label}</text>"#, num(m.0), num(m.1)).unwrap();
                }
            }
            _ => {
                let d = wc.cone.relint_point();
                if let Some((t0, t1)) = clip_ray(&d, window) {
                    let m = point(&d, &((t0 + t1) / Rational::from_integer(2.into())));
                    writeln!(out, r#"<text x="{}" y="{}" stroke="none">{label}</text>"#, num(m.0), num(m.1)).unwrap();
                }
            }
        }
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}
