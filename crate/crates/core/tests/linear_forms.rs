#![allow(clippy::needless_range_loop)]

use num_traits::{One, Zero};
use qzeta::exact_algebra::{rat, rat_pow, BigRat, CycloFrac, RatFunc};
use qzeta::linear_forms::*;

fn params(a: i64, r: i64, n: i64) -> FormParams {
    FormParams::new(a, r, n).unwrap()
}

/// Solves `M x = b` over the rationals by Gauss-Jordan elimination.
fn solve(mut m: Vec<Vec<BigRat>>, mut b: Vec<BigRat>) -> Vec<BigRat> {
    let n = m[0].len();
    for col in 0..n {
        let piv = (col..m.len()).find(|&i| !m[i][col].is_zero()).expect("singular");
        m.swap(col, piv);
        b.swap(col, piv);
        let inv = m[col][col].recip();
        for k in col..n {
            m[col][k] = &m[col][k] * &inv;
        }
        b[col] = &b[col] * &inv;
        for i in 0..m.len() {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for k in col..n {
                    let d = &f * &m[col][k];
                    m[i][k] -= d;
                }
                let d = &f * &b[col];
                b[i] -= d;
            }
        }
    }
    assert!(b[n..].iter().all(|v| v.is_zero()), "inconsistent system");
    b.truncate(n);
    b
}

/// Partial fractions of the rational function at a fixed rational `q`, from a
/// dense linear system in the unknowns `c[s][j]`.
fn partial_fraction_oracle(p: &FormParams, q: &BigRat) -> Vec<Vec<BigRat>> {
    let FormParams { a, n, .. } = *p;
    let unknowns = (a * (n + 1)) as usize;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut t = rat(3, 11);
    while rows.len() < unknowns + 4 {
        t += rat(1, 5);
        let Some(v) = rtilde_value(p, &t, q) else { continue };
        let mut row = Vec::with_capacity(unknowns);
        for s in 1..=a {
            for j in 0..=n {
                row.push(rat_pow(&(&t - rat_pow(q, -j)), -s));
            }
        }
        rows.push(row);
        rhs.push(v);
    }
    let x = solve(rows, rhs);
    (0..a as usize)
        .map(|s| (0..=n as usize).map(|j| x[s * (n as usize + 1) + j].clone()).collect())
        .collect()
}

#[test]
fn jets_match_linear_system() {
    for (a, r, n) in [(4, 1, 1), (4, 1, 2), (6, 2, 1)] {
        let p = params(a, r, n);
        let table = coefficients(&p).unwrap();
        for q in [rat(1, 2), rat(-2, 5)] {
            let oracle = partial_fraction_oracle(&p, &q);
            for s in 1..=a {
                for j in 0..=n {
                    let got = table.c(s, j).eval(&q).unwrap();
                    assert_eq!(got, oracle[(s - 1) as usize][j as usize], "{p:?} s={s} j={j}");
                }
            }
        }
    }
}

#[test]
fn jet_orders_agree() {
    let p = params(4, 1, 2);
    let long = rtilde_local_jet(&p, 1, 5).unwrap();
    let short = rtilde_local_jet(&p, 1, 3).unwrap();
    for i in 0..=3 {
        assert_eq!(long.coeff(i), short.coeff(i));
    }
    assert!(rtilde_local_jet(&p, 3, 3).is_err());
}

#[test]
fn structural_identities() {
    for (a, r, n) in [(4, 1, 0), (4, 1, 1), (4, 1, 3), (6, 1, 2), (6, 2, 2)] {
        let t = coefficients(&params(a, r, n)).unwrap();
        assert!(residue_sum(&t).is_zero());
        assert!(coefficient_symmetry_holds(&t));
        assert!(reconstruction_holds(&t));
        for s in 1..=a {
            assert!(functional_equation_holds(&t, s));
        }
    }
}

#[test]
fn d_table_relation() {
    let t = coefficients(&params(4, 1, 2)).unwrap();
    for s in 1..=4 {
        for j in 0..=2 {
            let sign = if s % 2 == 0 { 1 } else { -1 };
            let expect = CycloFrac::q_pow(j * s).times(t.c(s, j)).scaled(&rat(sign, 1));
            assert_eq!(t.d(s, j), expect);
        }
    }
}

/// Straight triple loop over `s`, `k` and `j >= k`, in canonical rational functions.
fn naive_p0(t: &CoefficientTable) -> RatFunc {
    let FormParams { a, n, .. } = t.params;
    let mut total = RatFunc::zero();
    for s in 1..=a {
        for k in 1..=n {
            let den = (&RatFunc::one() - &RatFunc::q_pow(k)).pow(s).unwrap();
            for j in k..=n {
                let term = &(&RatFunc::q_pow(k + j * (s - 1)) * &t.c_ratfunc(s, j)) / &den;
                total = if s % 2 == 0 { &total + &term } else { &total - &term };
            }
        }
    }
    total
}

#[test]
fn p0_matches_triple_sum() {
    for (a, r, n) in [(4, 1, 1), (4, 1, 2), (6, 2, 1)] {
        let t = coefficients(&params(a, r, n)).unwrap();
        assert_eq!(p_tilde_0_at_1(&t, Base::Q).to_ratfunc(), naive_p0(&t));
        assert_eq!(
            p_tilde_0_at_1(&t, Base::InvQ).to_ratfunc(),
            naive_p0(&t).invert_variable()
        );
    }
    let t0 = coefficients(&params(4, 1, 0)).unwrap();
    assert!(p_tilde_0_at_1(&t0, Base::Q).is_zero());
}

#[test]
fn p1_derivative_is_z_derivative() {
    for n in [0, 2, 3] {
        let t = coefficients(&params(4, 1, n)).unwrap();
        let poly = p_tilde_s(&t, 1);
        let deriv = poly
            .iter()
            .enumerate()
            .fold(CycloFrac::zero(), |acc, (j, c)| acc.plus(&c.scaled(&rat(j as i64, 1))));
        assert_eq!(deriv, p1_derivative_at_1(&t));
        let direct = (0..=n).fold(RatFunc::zero(), |acc, j| &acc - &t.c_ratfunc(1, j).scale_by(&rat(j, 1)));
        assert_eq!(p1_derivative_at_1(&t).to_ratfunc(), direct);
    }
    let t0 = coefficients(&params(4, 1, 0)).unwrap();
    assert!(p1_derivative_at_1(&t0).is_zero());
}

#[test]
fn odd_indices_only() {
    let f = build_linear_form(&params(8, 2, 1)).unwrap();
    assert_eq!(f.p_hat_odd.keys().copied().collect::<Vec<_>>(), vec![3, 5, 7]);
    let json = serde_json::to_string(&f.to_json()).unwrap();
    assert_eq!(qzeta::io::decode_linear_form(&json).unwrap(), f);
}

#[test]
fn n_zero_is_zeta3() {
    let f = build_linear_form(&params(4, 1, 0)).unwrap();
    assert!(f.p_hat_0.is_zero());
    assert!(f.p_hat_odd[&3] == RatFunc::one());
    // sum_k k^2 x^k = x(1+x)/(1-x)^3, so the n = 0 series is zeta_q(3) termwise
    let x = rat(1, 3);
    let one = BigRat::one();
    let lhs: BigRat = (1..40).map(|k| rat(k * k, 1) * rat_pow(&x, k)).sum();
    let closed = &x * (&one + &x) / rat_pow(&(&one - &x), 3);
    assert!((closed - lhs) < rat(1, 1_000_000_000));
}
