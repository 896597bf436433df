use num_bigint::BigInt;
use num_traits::{One, Zero};
use qzeta::exact_algebra::{rat, BigRat};
use qzeta::linear_forms::{build_linear_form, FormParams};
use qzeta::numerics::*;

fn params(a: i64, r: i64, n: i64) -> FormParams {
    FormParams::new(a, r, n).unwrap()
}

/// Plain partial sum of `Σ k^{s-1} q^k/(1-q^k)` in exact rationals, with the
/// crude tail bound `2 Σ_{k>K} k^{s-1} |q|^k` (valid for `|q| ≤ 1/2`).
fn direct_zeta(s: u32, q: &BigRat, terms: i64) -> (BigRat, BigRat) {
    let mut sum = BigRat::zero();
    let mut qk = BigRat::one();
    for k in 1..=terms {
        qk *= q;
        sum += BigRat::from_integer(BigInt::from(k).pow(s - 1)) * &qk / (BigRat::one() - &qk);
    }
    let x = if q < &BigRat::zero() { -q.clone() } else { q.clone() };
    let mut tail = BigRat::zero();
    let mut xk = num_traits::pow(x.clone(), terms as usize);
    for k in terms + 1..terms + 400 {
        xk *= &x;
        tail += BigRat::from_integer(BigInt::from(k).pow(s - 1)) * &xk;
    }
    (sum, tail * rat(4, 1))
}

#[test]
fn zeta_matches_direct_summation() {
    for (s, q) in [(1, rat(1, 2)), (3, rat(1, 2)), (2, rat(-1, 2)), (5, rat(1, 3))] {
        let z = zeta_q(s as i64, &q, 256).unwrap();
        let (sum, tail) = direct_zeta(s, &q, 200);
        let oracle = IntervalValue::with_radius(&sum, &tail, 256);
        assert!(z.overlaps(&oracle), "s={s} q={q}");
    }
    let z = zeta_q(1, &rat(1, 2), 128).unwrap();
    assert_eq!(sci_string(z.mid(), 7), "1.606695e0");
}

#[test]
fn zeta_divisor_sum_consistency() {
    for s in 1..=5 {
        for q in [rat(1, 2), rat(-1, 3), rat(1, 5)] {
            let a = zeta_q(s, &q, 128).unwrap();
            let b = zeta_q_divisor_sum(s, &q, 60, 128).unwrap();
            assert!(a.overlaps(&b), "s={s} q={q}");
        }
    }
}

#[test]
fn zeta_near_one_trend() {
    let pi = pi(64).to_f64();
    let limits = [(2, pi * pi / 6.0), (3, 2.0 * 1.202_056_903_159_594)];
    for (s, limit) in limits {
        let mut prev = 0.0;
        for m in 2..=10 {
            let q = rat(m - 1, m);
            let z = zeta_q(s, &q, 64).unwrap().to_f64();
            let scaled = z * (1.0 / m as f64).powi(s as i32);
            assert!(scaled > prev && scaled < limit, "s={s} m={m} {scaled}");
            prev = scaled;
        }
        assert!(limit - prev < 0.25 * limit);
    }
}

#[test]
fn zeta_small_q() {
    let q = rat(1, 100_000);
    for s in 1..=4 {
        let z = zeta_q(s, &q, 64).unwrap();
        assert!((z.to_f64() - 1e-5).abs() < 1e-9);
    }
    assert!(zeta_q(2, &rat(1, 1), 64).is_err());
    assert!(zeta_q(2, &rat(-3, 2), 64).is_err());
    assert!(zeta_q(0, &rat(1, 2), 64).is_err());
}

#[test]
fn refinement_is_monotone() {
    let q = rat(1, 3);
    let lo = zeta_q(3, &q, 128).unwrap();
    let hi = zeta_q(3, &q, 192).unwrap();
    assert!(lo.contains(&hi));
    let p = params(6, 1, 2);
    let lo = eval_s_tilde(&p, &q, 128).unwrap();
    let hi = eval_s_tilde(&p, &q, 192).unwrap();
    assert!(lo.contains(&hi));
}

#[test]
fn n_zero_series_is_zeta3() {
    let p = params(4, 1, 0);
    let s = eval_s_tilde(&p, &rat(1, 2), 256).unwrap();
    let z = zeta_q(3, &rat(1, 2), 256).unwrap();
    assert!(s.sub(&z).contains_zero());
    assert!(s.sub(&z).rad_log2() < -200.0);
}

#[test]
fn series_terms_start_after_rn() {
    for (a, r, n) in [(4, 1, 3), (6, 2, 2), (8, 3, 1)] {
        let p = params(a, r, n);
        for k in 1..=r * n {
            assert!(s_tilde_term(&p, &rat(1, 2), k).is_zero());
        }
        assert!(!s_tilde_term(&p, &rat(1, 2), r * n + 1).is_zero());
    }
}

#[test]
fn residuals_contain_zero() {
    for (a, r, n, q) in [(4, 1, 2, rat(1, 2)), (6, 1, 2, rat(1, 3)), (6, 2, 1, rat(-1, 2))] {
        let f = build_linear_form(&params(a, r, n)).unwrap();
        for prec in [128, 256] {
            let res = linear_form_residual(&f, &q, prec).unwrap();
            assert!(res.contains_zero(), "{a} {r} {n} {q} {res}");
            assert!(res.rad_log2() < -64.0);
        }
    }
}

#[test]
fn residual_detects_a_wrong_form() {
    let mut f = build_linear_form(&params(4, 1, 1)).unwrap();
    f.p_hat_0 = f.p_hat_0.scale_by(&rat(2, 1));
    let res = linear_form_residual(&f, &rat(1, 2), 128).unwrap();
    assert!(!res.contains_zero());
}

#[test]
fn functional_equation_at_inverse_point() {
    for (a, r, n) in [(4, 1, 1), (4, 1, 3), (6, 1, 2), (6, 2, 2)] {
        for q in [rat(1, 2), rat(-1, 3), rat(2, 5)] {
            let res = s_tilde_functional_residual(&params(a, r, n), &q, 128).unwrap();
            assert!(res.contains_zero(), "{a} {r} {n} {q}");
        }
    }
    assert!(eval_s_tilde(&params(4, 1, 1), &rat(1, 1), 64).is_err());
}

#[test]
fn sandwich_by_first_term() {
    for n in [4, 6, 8] {
        assert!(first_term_sandwich(&params(4, 1, n), &rat(1, 2), 96).unwrap());
        assert!(first_term_sandwich(&params(6, 2, n), &rat(1, 3), 96).unwrap());
    }
}

#[test]
fn z_s_differences() {
    for (s, q) in [(3, rat(1, 2)), (5, rat(1, 3)), (4, rat(-1, 2)), (7, rat(1, 2))] {
        let d = z_s_identity_check(s, &q, 128).unwrap();
        assert!(d.contains_zero(), "s={s}");
        assert!(d.rad_log2() < -90.0);
    }
    assert!(z_s_identity_check(1, &rat(1, 2), 64).is_err());
}

#[test]
fn eisenstein_values() {
    let q = rat(1, 2);
    let e2 = eisenstein(1, &q, 128).unwrap();
    let z = zeta_q(2, &q, 128).unwrap();
    let direct = z.mul_rat(&rat(-24, 1)).add_rat(&rat(1, 1));
    assert!(e2.overlaps(&direct));
    let e4 = eisenstein(2, &rat(1, 1_000_000), 64).unwrap();
    assert!((e4.to_f64() - 1.0).abs() < 1e-3);
    let e4 = eisenstein(2, &rat(1, 10), 128).unwrap();
    let z3 = zeta_q(4, &rat(1, 10), 128).unwrap();
    assert!(e4.overlaps(&z3.mul_rat(&rat(240, 1)).add_rat(&rat(1, 1))));
}

#[test]
fn slopes_approach_targets() {
    let s = slope_estimate(SlopeQuantity::STilde, 4, 1, &rat(1, 2), &[20]).unwrap();
    assert!(s[0].relative_gap.unwrap() < 0.15);
    let d = slope_estimate(SlopeQuantity::DN, 4, 1, &rat(1, 2), &[0, 50]).unwrap();
    assert!(d[0].slope.is_none());
    assert!(d[1].relative_gap.unwrap() < 0.20);
    assert!(slope_estimate(SlopeQuantity::DN, 4, 1, &rat(1, 2), &[5, 3]).is_err());
}
