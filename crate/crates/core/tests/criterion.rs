use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use num_bigint::BigInt;
use qzeta::criterion::*;
use qzeta::exact_algebra::BigRat;
use qzeta::numerics::IntervalValue;

fn float_f(r: f64, a: f64) -> f64 {
    let c = 24.0 / std::f64::consts::PI.powi(2);
    (4.0 * r * a + a - 4.0 * r * r) / ((c + 2.0) * a + 8.0 * r * r)
}

fn float_g(r: f64, a: f64) -> f64 {
    let c = 24.0 / std::f64::consts::PI.powi(2);
    (4.0 * r * a + a - 4.0 * r * r) / ((c + 2.0) * a - c + 8.0 * r * r)
}

#[test]
fn matches_float_formula() {
    for a in (4..=60).step_by(2) {
        for r in 1..=a / 2 {
            let f = f_of(r, a).unwrap();
            let g = g_of(r, a).unwrap();
            assert!((f.to_f64() - float_f(r as f64, a as f64)).abs() < 1e-12);
            assert!((g.to_f64() - float_g(r as f64, a as f64)).abs() < 1e-12);
            assert!(f.certainly_lt(&g));
        }
    }
    assert_eq!(4 * 2 * 10 + 10 - 4 * 2 * 2, 74);
}

#[test]
fn thresholds() {
    assert_eq!(threshold(Bound::G, 40).unwrap(), Some(10));
    assert_eq!(threshold(Bound::F, 40).unwrap(), Some(12));
}

#[test]
fn maxima_are_consistent() {
    assert!(monotonic_consistency(4, 200).unwrap());
    let (r, _) = max_over_r(Bound::G, 10).unwrap();
    assert_eq!(r, 2);
}

#[test]
fn rates_reproduce_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..20 {
        let a = 2 * rng.gen_range(2..=100i64);
        let r = rng.gen_range(1..=a / 2);
        let rates = CriterionRates::for_params(r, a).unwrap();
        let with = dimension_bound(&rates, true).unwrap();
        let without = dimension_bound(&rates, false).unwrap();
        let g = g_of(r, a).unwrap();
        let f = f_of(r, a).unwrap();
        for (x, y) in [(with, g), (without, f)] {
            assert!(x.overlaps(&y));
            let gap = x.sub(&y).mag() / y.mig();
            assert!(gap < BigRat::new(1.into(), num_traits::pow(BigInt::from(10), 20)));
        }
    }
}

#[test]
fn delta_zero_gives_plain_bound() {
    let mut rates = CriterionRates::for_params(2, 12).unwrap();
    let plain = dimension_bound(&rates, false).unwrap();
    rates.delta = IntervalValue::from_int(0, 128);
    assert!(dimension_bound(&rates, true).unwrap().overlaps(&plain));
}

#[test]
fn asymptotic_ratio() {
    let (r, v) = g_over_sqrt(1_000_000).unwrap();
    assert!(r > 1 && r < 500_000);
    let c = asymptotic_constant();
    assert!((c.to_f64() - 0.33587).abs() < 1e-4);
    assert!((v.to_f64() / c.to_f64() - 1.0).abs() < 0.01);
}

#[test]
fn table_rows() {
    let rows = table(&[10, 12]).unwrap();
    assert_eq!(rows[0].argmax_g, 2);
    assert!(rows[1].f.certainly_positive());
    let json = serde_json::to_string(&rows).unwrap();
    assert!(json.contains("\"A\":10"));
}
