//! Dimension lower bounds `f(r;A)`, `g(r;A)` and the rate assembly behind them.

use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::exact_algebra::{rat, BigRat};
use crate::numerics::{pi, IntervalValue, NumericsError};

/// Working precision for π² and everything built on it.
pub const CRITERION_PRECISION: u32 = 192;

#[derive(Debug, Error)]
pub enum CriterionError {
    #[error("invalid (r, A) = ({r}, {a}): need A even >= 4 and 1 <= r <= A/2")]
    OutOfRange { r: i64, a: i64 },
    #[error("alpha2 - delta must be positive")]
    NonPositiveRate,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Clone, Debug)]
pub struct BoundInputs {
    pub a: i64,
    pub r: i64,
    pub pi_sq: IntervalValue,
}

impl BoundInputs {
    pub fn new(r: i64, a: i64) -> Result<Self, CriterionError> {
        if a < 4 || a % 2 != 0 || r < 1 || 2 * r > a {
            return Err(CriterionError::OutOfRange { r, a });
        }
        Ok(BoundInputs {
            a,
            r,
            pi_sq: pi_squared().clone(),
        })
    }
}

pub fn pi_squared() -> &'static IntervalValue {
    static PI_SQ: OnceLock<IntervalValue> = OnceLock::new();
    PI_SQ.get_or_init(|| {
        let p = pi(CRITERION_PRECISION);
        p.mul(&p)
    })
}

fn int(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

fn ball(n: i64) -> IntervalValue {
    IntervalValue::from_int(n, CRITERION_PRECISION)
}

fn numerator(b: &BoundInputs) -> BigRat {
    int(4 * b.r * b.a + b.a - 4 * b.r * b.r)
}

/// `24/π²`.
fn c24(b: &BoundInputs) -> IntervalValue {
    ball(24).div(&b.pi_sq).expect("π² is bounded away from 0")
}

fn f_inputs(b: &BoundInputs) -> IntervalValue {
    let den = c24(b).add_rat(&int(2)).mul_rat(&int(b.a)).add_rat(&int(8 * b.r * b.r));
    IntervalValue::exact(numerator(b), CRITERION_PRECISION)
        .div(&den)
        .expect("positive denominator")
}

fn g_inputs(b: &BoundInputs) -> IntervalValue {
    let c = c24(b);
    let den = c
        .add_rat(&int(2))
        .mul_rat(&int(b.a))
        .sub(&c)
        .add_rat(&int(8 * b.r * b.r));
    IntervalValue::exact(numerator(b), CRITERION_PRECISION)
        .div(&den)
        .expect("positive denominator")
}

/// `f(r;A) = (4rA + A - 4r²) / ((24/π² + 2)A + 8r²)`.
pub fn f_of(r: i64, a: i64) -> Result<IntervalValue, CriterionError> {
    Ok(f_inputs(&BoundInputs::new(r, a)?))
}

/// `g(r;A) = (4rA + A - 4r²) / ((24/π² + 2)A - 24/π² + 8r²)`.
pub fn g_of(r: i64, a: i64) -> Result<IntervalValue, CriterionError> {
    Ok(g_inputs(&BoundInputs::new(r, a)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    F,
    G,
}

/// Maximum over `1 ≤ r ≤ A/2` as the hull `[max lower, max upper]`, with the
/// `r` of largest midpoint.
pub fn max_over_r(bound: Bound, a: i64) -> Result<(i64, IntervalValue), CriterionError> {
    let mut best: Option<(i64, IntervalValue)> = None;
    let mut lo: Option<BigRat> = None;
    let mut hi: Option<BigRat> = None;
    for r in 1..=a / 2 {
        let v = match bound {
            Bound::F => f_of(r, a)?,
            Bound::G => g_of(r, a)?,
        };
        lo = Some(lo.map_or(v.lower(), |x| x.max(v.lower())));
        hi = Some(hi.map_or(v.upper(), |x| x.max(v.upper())));
        if best.as_ref().is_none_or(|(_, b)| v.mid() > b.mid()) {
            best = Some((r, v));
        }
    }
    let (r, _) = best.ok_or(CriterionError::OutOfRange { r: 0, a })?;
    let (lo, hi) = (lo.unwrap(), hi.unwrap());
    let two = int(2);
    let mid = (&lo + &hi) / &two;
    let rad = (hi - lo) / two;
    Ok((r, IntervalValue::with_radius(&mid, &rad, CRITERION_PRECISION)))
}

pub fn f_max(a: i64) -> Result<IntervalValue, CriterionError> {
    Ok(max_over_r(Bound::F, a)?.1)
}

pub fn g_max(a: i64) -> Result<IntervalValue, CriterionError> {
    Ok(max_over_r(Bound::G, a)?.1)
}

/// Growth rates per unit `log|1/q|`.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionRates {
    pub alpha1: IntervalValue,
    pub alpha2: IntervalValue,
    pub delta: IntervalValue,
}

impl CriterionRates {
    /// `α₁ = -(A/8 + r²/2 + 3A/π² - r(A-2r)/2)`, `α₂ = A/4 + r² + 3A/π²`, `δ = 3/π²`.
    pub fn for_params(r: i64, a: i64) -> Result<Self, CriterionError> {
        let b = BoundInputs::new(r, a)?;
        let delta = ball(3).div(&b.pi_sq).expect("π² is bounded away from 0");
        let three_a = delta.mul_rat(&int(a));
        let alpha1 = three_a
            .add_rat(&(rat(a, 8) + rat(r * r, 2) - rat(r * (a - 2 * r), 2)))
            .neg();
        let alpha2 = three_a.add_rat(&(rat(a, 4) + int(r * r)));
        Ok(CriterionRates { alpha1, alpha2, delta })
    }
}

/// `1 + α₁/α₂`, or `1 + (α₁+δ)/(α₂-δ)` when the common factor is used.
pub fn dimension_bound(rates: &CriterionRates, use_delta: bool) -> Result<IntervalValue, CriterionError> {
    let (num, den) = if use_delta {
        (rates.alpha1.add(&rates.delta), rates.alpha2.sub(&rates.delta))
    } else {
        (rates.alpha1.clone(), rates.alpha2.clone())
    };
    if !den.certainly_positive() {
        return Err(CriterionError::NonPositiveRate);
    }
    Ok(num.div(&den)?.add_rat(&int(1)))
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityCheck {
    pub statement: String,
    pub lhs: IntervalValue,
    pub rhs: IntervalValue,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub checks: Vec<InequalityCheck>,
    pub pass: bool,
}

fn strict(statement: &str, lhs: &IntervalValue, rhs: &IntervalValue) -> InequalityCheck {
    InequalityCheck {
        statement: statement.to_string(),
        lhs: lhs.clone(),
        rhs: rhs.clone(),
        certified: lhs.certainly_lt(rhs),
    }
}

/// The three chains around `A = 10`, `38/40` and `86`, each link certified by
/// disjoint enclosures.
pub fn inequality_suite() -> Result<InequalityReport, CriterionError> {
    let (f10, g10) = (f_max(10)?, g_max(10)?);
    let (f38, g38) = (f_max(38)?, g_max(38)?);
    let (f40, g40) = (f_max(40)?, g_max(40)?);
    let (f86, g86) = (f_max(86)?, g_max(86)?);
    let g2_10 = g_of(2, 10)?;
    let exact = |n: i64, d: i64| IntervalValue::exact(rat(n, d), CRITERION_PRECISION);
    let checks = vec![
        strict("f(10) < 1", &f10, &exact(1, 1)),
        strict("1 < g(10)", &exact(1, 1), &g10),
        strict("1.0010 < g(2;10)", &exact(10010, 10000), &g2_10),
        strict("g(2;10) < 1.0020", &g2_10, &exact(10020, 10000)),
        strict("f(38) < g(38)", &f38, &g38),
        strict("g(38) < 2", &g38, &exact(2, 1)),
        strict("2 < f(40)", &exact(2, 1), &f40),
        strict("f(40) < g(40)", &f40, &g40),
        strict("f(86) < 3", &f86, &exact(3, 1)),
        strict("3 < g(86)", &exact(3, 1), &g86),
    ];
    let pass = checks.iter().all(|c| c.certified);
    Ok(InequalityReport { checks, pass })
}

/// Smallest even `A ≥ 4` whose maximal bound is certified above 1, with every
/// smaller even `A` certified below 1. `None` if no crossing up to `a_max`
/// or a comparison cannot be decided.
pub fn threshold(bound: Bound, a_max: i64) -> Result<Option<i64>, CriterionError> {
    let one = ball(1);
    for a in (4..=a_max).step_by(2) {
        let v = max_over_r(bound, a)?.1;
        if one.certainly_lt(&v) {
            return Ok(Some(a));
        }
        if !v.certainly_lt(&one) {
            return Ok(None);
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    #[serde(rename = "A")]
    pub a: i64,
    pub argmax_f: i64,
    pub argmax_g: i64,
    pub f: IntervalValue,
    pub g: IntervalValue,
}

pub fn table(a_values: &[i64]) -> Result<Vec<TableRow>, CriterionError> {
    a_values
        .iter()
        .map(|&a| {
            let (argmax_f, f) = max_over_r(Bound::F, a)?;
            let (argmax_g, g) = max_over_r(Bound::G, a)?;
            Ok(TableRow {
                a,
                argmax_f,
                argmax_g,
                f,
                g,
            })
        })
        .collect()
}

/// `g(A) ≥ f(A)` certified and both maximisers in `1..=A/2`, for every even `A` in the range.
pub fn monotonic_consistency(a_min: i64, a_max: i64) -> Result<bool, CriterionError> {
    for a in (a_min..=a_max).filter(|a| a % 2 == 0) {
        let (rf, f) = max_over_r(Bound::F, a)?;
        let (rg, g) = max_over_r(Bound::G, a)?;
        let ok_order = f.certainly_lt(&g);
        let ok_r = (1..=a / 2).contains(&rf) && (1..=a / 2).contains(&rg);
        if !(ok_order && ok_r) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `π / (2 √(π² + 12))`.
pub fn asymptotic_constant() -> IntervalValue {
    let p = pi(CRITERION_PRECISION);
    let root = pi_squared().add_rat(&int(12)).sqrt().expect("positive");
    p.div(&root.mul_rat(&int(2))).expect("positive")
}

/// `g(A)/√A` for large `A`. The maximiser of `g(·;A)` over real `r` is unique
/// (concave numerator over convex positive denominator), so a float scan
/// locates it and the enclosure is taken over its integer neighbours.
pub fn g_over_sqrt(a: i64) -> Result<(i64, IntervalValue), CriterionError> {
    BoundInputs::new(1, a)?;
    let pi2 = pi_squared().to_f64();
    let af = a as f64;
    let gf = |r: f64| (4.0 * r * af + af - 4.0 * r * r) / ((24.0 / pi2 + 2.0) * af - 24.0 / pi2 + 8.0 * r * r);
    let mut best = 1;
    let mut best_v = f64::MIN;
    for r in 1..=a / 2 {
        let v = gf(r as f64);
        if v > best_v {
            best_v = v;
            best = r;
        }
    }
    let lo_r = (best - 2).max(1);
    let hi_r = (best + 2).min(a / 2);
    let mut top: Option<(i64, IntervalValue)> = None;
    for r in lo_r..=hi_r {
        let v = g_of(r, a)?;
        if top.as_ref().is_none_or(|(_, t)| v.mid() > t.mid()) {
            top = Some((r, v));
        }
    }
    let (r, v) = top.expect("non-empty window");
    let root = IntervalValue::from_int(a, CRITERION_PRECISION).sqrt()?;
    Ok((r, v.div(&root)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert!((f_of(2, 10).unwrap().to_f64() - 0.9697).abs() < 1e-4);
        assert!((g_of(2, 10).unwrap().to_f64() - 1.0016).abs() < 1e-4);
        assert!(f_of(0, 10).is_err() && f_of(6, 10).is_err() && g_of(1, 7).is_err());
        assert!(f_of(5, 10).is_ok());
    }

    #[test]
    fn suite_passes() {
        let rep = inequality_suite().unwrap();
        assert!(
            rep.pass,
            "{:?}",
            rep.checks.iter().filter(|c| !c.certified).collect::<Vec<_>>()
        );
    }
}
