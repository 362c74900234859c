//! Dense exact simplex with Bland's rule.

use num_traits::{One, Signed, Zero};

use crate::exactalg::{to_rat, IntVec, RatVec, Rational};

pub enum LpOutcome {
    Optimal { value: Rational, x: RatVec },
    Unbounded,
}

/// Maximizes `c.x` subject to `A x <= b`, `x >= 0`, for `b >= 0` so that the
/// slack basis is feasible.
pub fn maximize(c: &[Rational], a: &[RatVec], b: &[Rational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    assert!(b.iter().all(|x| !x.is_negative()), "right-hand side must be nonnegative");
    // Tableau rows: [A | I | b]; objective row holds reduced costs.
    let width = n + m + 1;
    let mut t: Vec<RatVec> = (0..m)
        .map(|i| {
            let mut row = vec![Rational::zero(); width];
            row[..n].clone_from_slice(&a[i]);
            row[n + i] = Rational::one();
            row[width - 1] = b[i].clone();
            row
        })
        .collect();
    let mut obj: RatVec = vec![Rational::zero(); width];
    for (j, cj) in c.iter().enumerate() {
        obj[j] = -cj.clone();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        let Some(enter) = (0..n + m).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((l, r)) => ratio < *r || (ratio == *r && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            return LpOutcome::Unbounded;
        };
        let inv = t[r][enter].recip();
        for x in t[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (x, p) in obj.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        basis[r] = enter;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1].clone();
        }
    }
    LpOutcome::Optimal { value: obj[width - 1].clone(), x }
}

/// A point with `a.x > 0` for every `a` in `strict` and `e.x = 0` for every
/// `e` in `eqs`, if one exists.
pub fn strict_point(n: usize, strict: &[IntVec], eqs: &[IntVec]) -> Option<RatVec> {
    // Variables: u (n), v (n), t; x = u - v.
    let nv = 2 * n + 1;
    let mut rows: Vec<RatVec> = Vec::new();
    let mut rhs: RatVec = Vec::new();
    let mut push = |coef: &[Rational], sign: i32, t_coef: i32, b: Rational| {
        let mut row = vec![Rational::zero(); nv];
        for j in 0..n {
            let cj = if sign < 0 { -coef[j].clone() } else { coef[j].clone() };
            row[n + j] = -cj.clone();
            row[j] = cj;
        }
        row[2 * n] = Rational::from_integer(t_coef.into());
        rows.push(row);
        rhs.push(b);
    };
    for a in strict {
        push(&to_rat(a), -1, 1, Rational::zero());
    }
    for e in eqs {
        let e = to_rat(e);
        push(&e, 1, 0, Rational::zero());
        push(&e, -1, 0, Rational::zero());
    }
    let mut bound = vec![Rational::zero(); nv];
    for x in bound.iter_mut().take(2 * n) {
        *x = Rational::one();
    }
    rows.push(bound);
    rhs.push(Rational::one());
    let mut tcap = vec![Rational::zero(); nv];
    tcap[2 * n] = Rational::one();
    rows.push(tcap);
    rhs.push(Rational::one());
    let mut c = vec![Rational::zero(); nv];
    c[2 * n] = Rational::one();
    match maximize(&c, &rows, &rhs) {
        LpOutcome::Optimal { value, x } if value.is_positive() => {
            Some((0..n).map(|j| &x[j] - &x[n + j]).collect())
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{dot_int_rat, int, ivec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_lp() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6.
        let out = maximize(&[int(1), int(1)], &[vec![int(1), int(2)], vec![int(3), int(1)]], &[int(4), int(6)]);
        match out {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, Rational::new(14.into(), 5.into())),
            LpOutcome::Unbounded => panic!("bounded problem"),
        }
        assert!(matches!(maximize(&[int(1)], &[vec![int(-1)]], &[int(0)]), LpOutcome::Unbounded));
    }

    #[test]
    fn strict_points() {
        let p = strict_point(2, &[ivec(&[1, 0]), ivec(&[0, 1])], &[]).unwrap();
        assert!(p.iter().all(|x| x.is_positive()));
        assert!(strict_point(2, &[ivec(&[1, 0]), ivec(&[-1, 0])], &[]).is_none());
        let q = strict_point(3, &[ivec(&[1, 0, 0])], &[ivec(&[0, 1, -1])]).unwrap();
        assert_eq!(q[1], q[2]);
    }

    #[test]
    fn agrees_with_sampling_in_the_plane() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let k = rng.gen_range(1..=4);
            let cons: Vec<IntVec> = (0..k).map(|_| ivec(&[rng.gen_range(-3..=3), rng.gen_range(-3..=3)])).collect();
            let lp = strict_point(2, &cons, &[]);
            let mut sampled = false;
            for i in 0..360 {
                let th = (i as f64) * std::f64::consts::PI / 180.0;
                let (x, y) = (th.cos(), th.sin());
                if cons.iter().all(|a| {
                    let v = a[0].to_string().parse::<f64>().unwrap() * x + a[1].to_string().parse::<f64>().unwrap() * y;
                    v > 1e-9
                }) {
                    sampled = true;
                    break;
                }
            }
            if let Some(p) = &lp {
                assert!(cons.iter().all(|a| dot_int_rat(a, p).is_positive()));
            }
            assert_eq!(lp.is_some(), sampled, "constraints {cons:?}");
        }
    }
}
