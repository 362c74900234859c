use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trop_core::cpl::{as_codim0_cycle, linear_combine, product, support_function, ConewisePoly};
use trop_core::exactalg::{int, rat, to_f64, MultiPoly, RatVec, Rational};
use trop_core::polytope::{convex_hull, mixed_volume_facet_recursion, mixed_volume_polarization, Polytope};
use trop_core::tropical::{
    corner_locus, formula_star, formula_star_float, is_balanced, mixed_volume_from_product,
    stable_intersection_with_epsilon, Subspace, WeightedFan,
};
use trop_core::verify::{
    plane_example, plane_expected_intermediate, random_polytope, tropical_plane_self_intersection,
    verify_bernstein, verify_differential_identities, verify_equal_products, verify_gusev, verify_union_identity,
};
use trop_core::Error;

const SEED: u64 = 0x7e0b_2024;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], summary: String) -> Outcome {
    if failures.is_empty() {
        Outcome { pass: true, detail: summary }
    } else {
        Outcome { pass: false, detail: format!("{summary}; {} failures, first: {}", failures.len(), failures[0]) }
    }
}

fn tuple(rng: &mut ChaCha8Rng, dim: usize, count: usize) -> Vec<Polytope> {
    (0..count).map(|_| random_polytope(dim, rng.gen_range(1..=8), rng.gen()).unwrap()).collect()
}

fn supports(ps: &[Polytope]) -> Vec<ConewisePoly> {
    ps.iter().map(support_function).collect()
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-6..=6), rng.gen_range(1..=3))
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> RatVec {
    (0..n).map(|_| small_rational(rng)).collect()
}

fn generic_vec(rng: &mut ChaCha8Rng, n: usize) -> RatVec {
    (0..n).map(|_| rat(rng.gen_range(-1000..=1000), rng.gen_range(1..=997))).collect()
}

fn criterion_1(corpus: &mut Vec<(usize, ConewisePoly, Rational)>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let start = Instant::now();
    let mut failures = Vec::new();
    for (dim, count) in [(2, 100), (3, 100), (4, 10)] {
        for i in 0..count {
            let ps = tuple(&mut rng, dim, dim);
            let f = product(&supports(&ps)).unwrap();
            let pol = mixed_volume_polarization(&ps).unwrap();
            let facet = mixed_volume_facet_recursion(&ps).unwrap();
            let delta = mixed_volume_from_product(&f).unwrap();
            let star = formula_star(&f).unwrap();
            if !(pol == facet && pol == delta && pol == star) {
                failures.push(format!("dim {dim} #{i}: polarization {pol}, facet {facet}, delta {delta}, star {star}"));
            }
            if dim < 4 {
                corpus.push((dim, f, pol));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(120) {
        failures.push(format!("runtime {elapsed:.1?} exceeds 120 s"));
    }
    outcome(&failures, format!("210 tuples in dims 2-4 agree across four methods in {elapsed:.1?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let seg = |x: i64, y: i64| convex_hull(&[vec![int(0), int(0)], vec![int(x), int(y)]]).unwrap();
    let (a, b, c) = (seg(1, 0), seg(0, 1), seg(1, 1));
    for (name, pair, expected) in [("A.B", [a.clone(), b.clone()], int(1)), ("C.C", [c.clone(), c.clone()], int(0))] {
        let f = product(&supports(&pair)).unwrap();
        let values = [
            mixed_volume_polarization(&pair).unwrap(),
            mixed_volume_facet_recursion(&pair).unwrap(),
            mixed_volume_from_product(&f).unwrap(),
            formula_star(&f).unwrap(),
        ];
        if values.iter().any(|v| *v != expected) {
            failures.push(format!("{name}: {values:?}, expected {expected}"));
        }
    }
    match tropical_plane_self_intersection() {
        Ok(v) if v == int(-1) => {}
        Ok(v) => failures.push(format!("plane self-intersection {v}, expected -1")),
        Err(e) => failures.push(format!("plane fixture: {e}")),
    }
    let ex = plane_example(&[int(0), int(0), int(0)]).unwrap();
    if ex.intermediate.normalize() != plane_expected_intermediate().unwrap() {
        failures.push("intermediate corner locus is not the ray (1,1,0) with weight -2x".into());
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(5) {
        failures.push(format!("runtime {elapsed:.1?} exceeds 5 s"));
    }
    outcome(&failures, format!("A.B = 1, C.C = 0, plane value -1 with ray (1,1,0) weight -2x, in {elapsed:.1?}"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut failures = Vec::new();
    for i in 0..100 {
        let dim = 2 + i % 2;
        let ps = tuple(&mut rng, dim, 2);
        let r = verify_gusev(&ps[0], &ps[1]).unwrap();
        if !r.pass {
            failures.push(format!("gusev #{i}: {}", serde_json::to_string(&r).unwrap()));
        }
    }
    for i in 0..100 {
        let dim = 2 + i % 2;
        let ps = tuple(&mut rng, dim, dim);
        let r = verify_union_identity(&ps).unwrap();
        if !r.pass {
            failures.push(format!("union #{i}: {}", serde_json::to_string(&r).unwrap()));
        }
    }
    outcome(&failures, "Gusev identity on 100 pairs (plane cases also the two-dimensional form), union identity on 100 tuples".into())
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut failures = Vec::new();
    for i in 0..50 {
        let dim = 2 + i % 2;
        let ps = tuple(&mut rng, dim, dim);
        match verify_bernstein(&ps, &mut rng) {
            Ok(r) if r.pass => {}
            Ok(r) => failures.push(format!("#{i}: {}", serde_json::to_string(&r).unwrap())),
            Err(e) => failures.push(format!("#{i}: {e}")),
        }
    }
    outcome(&failures, "stable intersection of corner loci equals the mixed volume on 50 tuples".into())
}

/// A random element of the ring in dimension `n`: a product of support
/// functions as a codimension-0 cycle, possibly passed through the corner
/// locus once.
fn random_cycle(rng: &mut ChaCha8Rng, n: usize) -> WeightedFan {
    let factors = rng.gen_range(1..=2);
    let ps = tuple(rng, n, factors);
    let f = as_codim0_cycle(&product(&supports(&ps)).unwrap()).unwrap();
    if rng.gen_bool(0.5) {
        corner_locus(&f).unwrap()
    } else {
        f
    }
}

fn random_plane(rng: &mut ChaCha8Rng) -> Subspace {
    loop {
        if let Ok(l) = Subspace::from_spanning(3, &[random_vec(rng, 3), random_vec(rng, 3)]) {
            if l.dim() == 2 {
                return l;
            }
        }
    }
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut failures = Vec::new();
    let trials = 25;
    for i in 0..trials {
        let n = 2 + i % 2;
        let d = rng.gen_range(1..=n + 1);
        let ps = tuple(&mut rng, n, d);
        let mut w = as_codim0_cycle(&product(&supports(&ps)).unwrap()).unwrap();
        for step in 0..=d {
            let next = corner_locus(&w).unwrap();
            let report = is_balanced(&next);
            if !report.pass {
                failures.push(format!("balance #{i} step {step}: {} violations", report.violations.len()));
            }
            w = next;
        }
        if !w.normalize().is_empty() {
            failures.push(format!("nilpotency #{i}: delta^{} of degree {d} is nonzero", d + 1));
        }
    }
    for i in 0..trials {
        let f = random_cycle(&mut rng, 3);
        let g = random_cycle(&mut rng, 3);
        let l = random_plane(&mut rng);
        match verify_differential_identities(&f, &g, &l, &mut rng) {
            Ok(r) if r.pass => {}
            Ok(r) => failures.push(format!("leibniz/restriction #{i}: {}", serde_json::to_string(&r).unwrap())),
            Err(e) => failures.push(format!("leibniz/restriction #{i}: {e}")),
        }
    }
    let mut checked = 0;
    while checked < trials {
        let n = 2 + checked % 2;
        let a = random_cycle(&mut rng, n);
        let b = random_cycle(&mut rng, n);
        if a.codim() + b.codim() > n {
            continue;
        }
        let mut results = Vec::new();
        while results.len() < 2 {
            match stable_intersection_with_epsilon(&a, &b, &generic_vec(&mut rng, n)) {
                Ok(s) => results.push(s.normalize()),
                Err(Error::GenericityFailure { .. }) => {}
                Err(e) => {
                    failures.push(format!("stable intersection #{checked}: {e}"));
                    break;
                }
            }
        }
        if results.len() == 2 && results[0] != results[1] {
            failures.push(format!("epsilon dependence #{checked}"));
        }
        checked += 1;
    }
    outcome(
        &failures,
        format!("{trials} instances each of balancing, nilpotency, Leibniz, restriction and displacement independence"),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let mut failures = Vec::new();
    for i in 0..50 {
        let n = 2 + i % 2;
        let ps = tuple(&mut rng, n, n);
        let mut fs = supports(&ps);
        let base = mixed_volume_from_product(&product(&fs).unwrap()).unwrap();
        let j = rng.gen_range(0..n);
        let ell = ConewisePoly::global(MultiPoly::linear(&random_vec(&mut rng, n)));
        fs[j] = linear_combine(&[fs[j].clone(), ell], &[int(1), int(1)]).unwrap();
        let twisted = mixed_volume_from_product(&product(&fs).unwrap()).unwrap();
        if base != twisted {
            failures.push(format!("#{i}: {base} became {twisted}"));
        }
    }
    outcome(&failures, "mixed volume unchanged by a linear twist of one factor on 50 tuples".into())
}

fn criterion_7(corpus: &[(usize, ConewisePoly, Rational)]) -> Outcome {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (i, (dim, f, exact)) in corpus.iter().enumerate() {
        let e = to_f64(exact);
        let x = formula_star_float(f).unwrap();
        let err = (x - e).abs() / e.abs().max(1.0);
        worst = worst.max(err);
        if err.is_nan() || err > 1e-9 {
            failures.push(format!("#{i} dim {dim}: float {x}, exact {exact}"));
        }
    }
    outcome(
        &failures,
        format!("{} dim-2/3 instances, worst relative error {worst:.2e} (denominator max(|exact|, 1))", corpus.len()),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let mut failures = Vec::new();
    let scales = [rat(2, 1), rat(1, 2), rat(3, 1), rat(2, 3), rat(5, 4)];
    for i in 0..25 {
        let ps = tuple(&mut rng, 2, 2);
        let c = scales[i % scales.len()].clone();
        let cs = [c.clone(), Rational::from_integer(1.into()) / c];
        let shifts = [random_vec(&mut rng, 2), random_vec(&mut rng, 2)];
        match verify_equal_products(&ps, &cs, &shifts, &mut rng) {
            Ok(r) if r.pass => {}
            Ok(r) => failures.push(format!("#{i}: {}", serde_json::to_string(&r).unwrap())),
            Err(e) => failures.push(format!("#{i}: {e}")),
        }
    }
    outcome(&failures, "25 planar pairs with equal support products up to linear terms share intersection numbers".into())
}

fn main() -> ExitCode {
    let mut corpus = Vec::new();
    let runs: Vec<(usize, Box<dyn FnOnce() -> Outcome + '_>)> = vec![
        (1, Box::new(|| criterion_1(&mut corpus))),
        (2, Box::new(criterion_2)),
        (3, Box::new(criterion_3)),
        (4, Box::new(criterion_4)),
        (5, Box::new(criterion_5)),
        (6, Box::new(criterion_6)),
    ];
    let mut all = true;
    let mut report = |k: usize, o: Outcome| {
        all &= o.pass;
        println!("{} criterion {k}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    };
    for (k, run) in runs {
        let o = run();
        report(k, o);
    }
    report(7, criterion_7(&corpus));
    report(8, criterion_8());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
