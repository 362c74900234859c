use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trop_core::cpl::{as_codim0_cycle, multiply, support_function};
use trop_core::exactalg::{int, ivec, rvec, MultiPoly, RatVec};
use trop_core::fan::Cone;
use trop_core::polytope::{convex_hull, Polytope};
use trop_core::tropical::*;

fn poly(pts: &[&[i64]]) -> Polytope {
    convex_hull(&pts.iter().map(|p| rvec(p)).collect::<Vec<RatVec>>()).unwrap()
}

fn ray_fan(rays: &[(&[i64], i64)]) -> WeightedFan {
    let cones = rays
        .iter()
        .map(|(r, w)| {
            let c = Cone::from_generators(2, &[ivec(r)], &[]);
            let frame = c.conormal().to_vec();
            WeightedCone::new(c, frame, MultiPoly::constant(2, int(*w)))
        })
        .collect();
    WeightedFan::new(2, 1, 0, cones).unwrap()
}

#[test]
fn corner_locus_of_segment_is_y_axis() {
    let f = support_function(&poly(&[&[0, 0], &[1, 0]]));
    let d = corner_locus(&as_codim0_cycle(&f).unwrap()).unwrap();
    assert_eq!(d.cones().len(), 1);
    let c = &d.cones()[0];
    assert_eq!(c.cone.lineality(), &[ivec(&[0, 1])]);
    assert_eq!(c.weight, MultiPoly::constant(2, int(1)));
}

#[test]
fn corner_locus_of_triangle_is_tropical_line() {
    let f = support_function(&poly(&[&[0, 0], &[1, 0], &[0, 1]]));
    let d = corner_locus(&as_codim0_cycle(&f).unwrap()).unwrap();
    let mut rays: Vec<_> = d.cones().iter().map(|c| c.cone.rays()[0].clone()).collect();
    rays.sort();
    assert_eq!(rays, vec![ivec(&[-1, 0]), ivec(&[0, -1]), ivec(&[1, 1])]);
    assert!(d.cones().iter().all(|c| c.weight == MultiPoly::constant(2, int(1))));
    assert!(is_balanced(&d).pass);
}

#[test]
fn balancing_examples() {
    assert!(is_balanced(&ray_fan(&[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 1)])).pass);
    let r = is_balanced(&ray_fan(&[(&[1, 0], 1), (&[0, 1], 1)]));
    assert!(!r.pass);
    assert_eq!(r.violations[0].face.dim(), 0);
}

#[test]
fn mixed_volumes_from_products() {
    let a = support_function(&poly(&[&[0, 0], &[1, 0]]));
    let b = support_function(&poly(&[&[0, 0], &[0, 1]]));
    let c = support_function(&poly(&[&[0, 0], &[1, 1]]));
    let s = support_function(&poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]));
    let ab = multiply(&a, &b).unwrap();
    let cc = multiply(&c, &c).unwrap();
    let ss = multiply(&s, &s).unwrap();
    assert_eq!(mixed_volume_from_product(&ab).unwrap(), int(1));
    assert_eq!(mixed_volume_from_product(&cc).unwrap(), int(0));
    assert_eq!(mixed_volume_from_product(&ss).unwrap(), int(2));
    assert_eq!(formula_star(&ab).unwrap(), int(1));
    assert_eq!(formula_star(&cc).unwrap(), int(0));
    assert_eq!(formula_star(&ss).unwrap(), int(2));
    assert!((formula_star_float(&ss).unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn two_tropical_lines_meet_once() {
    let line = ray_fan(&[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 1)]);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let p = stable_intersection(&line, &line, &mut rng).unwrap();
    assert_eq!(point_weight(&p).unwrap(), int(1));
    let x = ray_fan(&[(&[1, 0], 1), (&[-1, 0], 1)]);
    let y = ray_fan(&[(&[0, 1], 1), (&[0, -1], 1)]);
    assert_eq!(point_weight(&stable_intersection(&x, &y, &mut rng).unwrap()).unwrap(), int(1));
}
