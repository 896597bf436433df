//! Certified evaluation of q-series at rational points.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact_algebra::{rat_pow, BigRat};
use crate::linear_forms::{FormParams, LinearForm};
use crate::qtoolkit::{binomial, stirling_unsigned};

use super::interval::{ln_abs, two_pow, IntervalValue};
use super::NumericsError;

const MAX_TERMS: i64 = 2_000_000;

fn one() -> BigRat {
    BigRat::one()
}

fn int(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

pub fn check_inside(q: &BigRat) -> Result<(), NumericsError> {
    if q.is_zero() || q.abs() >= one() {
        return Err(NumericsError::QPoint(format!("need 0 < |q| < 1, got {q}")));
    }
    Ok(())
}

pub fn check_off_circle(q: &BigRat) -> Result<(), NumericsError> {
    if q.is_zero() || q.abs() == one() {
        return Err(NumericsError::QPoint(format!("need q != 0 and |q| != 1, got {q}")));
    }
    Ok(())
}

/// Sums `term(k)` from `start` on, stopping once `tail(K, t_K)` certifies the
/// remainder below `tol`; `estimate` is a cheap float guess of `ln tail`.
fn certified_sum(
    prec: u32,
    start: i64,
    mut term: impl FnMut(i64) -> IntervalValue,
    estimate: impl Fn(i64, &IntervalValue) -> f64,
    tail: impl Fn(i64, &IntervalValue) -> Option<BigRat>,
    tol: impl Fn(&IntervalValue) -> BigRat,
) -> Result<IntervalValue, NumericsError> {
    let mut sum = IntervalValue::zero(prec);
    let mut k = start;
    while k < start + MAX_TERMS {
        let t = term(k);
        sum = sum.add(&t);
        let tl = tol(&sum);
        if estimate(k, &t) < ln_abs(&tl) - 1.0 {
            if let Some(b) = tail(k, &t) {
                if b <= tl {
                    return Ok(sum.inflate(&b));
                }
            }
        }
        k += 1;
    }
    Err(NumericsError::NoConvergence)
}

fn absolute_tol(prec: u32) -> impl Fn(&IntervalValue) -> BigRat {
    move |_| two_pow(-(prec as i64) - 2)
}

/// `ζ_q(s) = Σ_k k^{s-1} q^k / (1 - q^k)` for `0 < |q| < 1`.
pub fn zeta_q(s: i64, q: &BigRat, prec: u32) -> Result<IntervalValue, NumericsError> {
    if s < 1 {
        return Err(NumericsError::Domain(format!("zeta_q needs s >= 1, got {s}")));
    }
    check_inside(q)?;
    let x = q.abs();
    let lnx = ln_abs(&x);
    let qb = IntervalValue::exact(q.clone(), prec);
    let one_b = IntervalValue::from_int(1, prec);
    let mut qk = one_b.clone();
    let sm1 = (s - 1) as u32;
    let term = |k: i64| {
        qk = qk.mul(&qb);
        let kp = num_traits::pow(int(k), sm1 as usize);
        qk.mul_rat(&kp)
            .div(&one_b.sub(&qk))
            .expect("1 - q^k is bounded away from 0")
    };
    let estimate = |k: i64, _: &IntervalValue| {
        let rho = ((k + 2) as f64 / (k + 1) as f64).powi(sm1 as i32) * x_f64(&x);
        if rho >= 1.0 {
            return f64::INFINITY;
        }
        (s - 1) as f64 * ((k + 1) as f64).ln() + (k + 1) as f64 * lnx - (1.0 - rho).ln() - (1.0 - x_f64(&x)).ln()
    };
    let tail = |k: i64, _: &IntervalValue| {
        let rho = num_traits::pow(int(k + 2) / int(k + 1), sm1 as usize) * &x;
        if rho >= one() {
            return None;
        }
        let xk = rat_pow(&x, k + 1);
        let lead = num_traits::pow(int(k + 1), sm1 as usize) * &xk;
        Some(lead / ((one() - rho) * (one() - xk)))
    };
    certified_sum(prec, 1, term, estimate, tail, absolute_tol(prec))
}

fn x_f64(x: &BigRat) -> f64 {
    ln_abs(x).exp()
}

fn sigma(m: i64, power: u32) -> BigInt {
    let mut acc = BigInt::zero();
    let mut d = 1;
    while d * d <= m {
        if m % d == 0 {
            acc += num_traits::pow(BigInt::from(d), power as usize);
            let e = m / d;
            if e != d {
                acc += num_traits::pow(BigInt::from(e), power as usize);
            }
        }
        d += 1;
    }
    acc
}

/// `ζ_q(s)` from the divisor-sum definition `Σ_m q^m σ_{s-1}(m)`, summed exactly
/// for `m ≤ terms`, with the tail bounded by `Σ_{m>M} m^s |q|^m`.
pub fn zeta_q_divisor_sum(s: i64, q: &BigRat, terms: i64, prec: u32) -> Result<IntervalValue, NumericsError> {
    if s < 1 || terms < 1 {
        return Err(NumericsError::Domain("divisor sum needs s >= 1 and terms >= 1".into()));
    }
    check_inside(q)?;
    let mut sum = BigRat::zero();
    let mut qm = one();
    for m in 1..=terms {
        qm *= q;
        sum += &qm * BigRat::from_integer(sigma(m, (s - 1) as u32));
    }
    let x = q.abs();
    let rho = num_traits::pow(int(terms + 2) / int(terms + 1), s as usize) * &x;
    if rho >= one() {
        return Err(NumericsError::NoConvergence);
    }
    let tail = num_traits::pow(int(terms + 1), s as usize) * rat_pow(&x, terms + 1) / (one() - rho);
    Ok(IntervalValue::with_radius(&sum, &tail, prec))
}

fn poch_exact(q: &BigRat, a: i64, len: i64) -> BigRat {
    let mut acc = one();
    for i in 0..len {
        acc *= one() - rat_pow(q, a + i);
    }
    acc
}

/// Exponent of `q^k` in the summand of `S̃ₙ`, per unit of `k`.
fn s_tilde_power(p: &FormParams) -> i64 {
    let twice = (p.a - 2 * p.r) * p.n + p.a - 2;
    assert!(twice % 2 == 0, "A must be even");
    twice / 2
}

/// The `k`-th summand of `S̃ₙ(q)`, exactly; zero for `1 ≤ k ≤ rn`.
pub fn s_tilde_term(p: &FormParams, q: &BigRat, k: i64) -> BigRat {
    assert!(k >= 1);
    let rn = p.r * p.n;
    let num = poch_exact(q, 1, p.n).pow((p.a - 2 * p.r) as i32)
        * (one() - rat_pow(q, 2 * k + p.n))
        * poch_exact(q, k - rn, rn)
        * poch_exact(q, k + p.n + 1, rn)
        * rat_pow(q, k * s_tilde_power(p));
    if num.is_zero() {
        return num;
    }
    num / poch_exact(q, k, p.n + 1).pow(p.a as i32)
}

/// `t_{k+1} / t_k` for `k > rn`.
pub fn s_tilde_ratio(p: &FormParams, q: &BigRat, k: i64) -> BigRat {
    let rn = p.r * p.n;
    let n = p.n;
    let f = |a: i64, b: i64| (one() - rat_pow(q, a)) / (one() - rat_pow(q, b));
    rat_pow(q, s_tilde_power(p))
        * f(2 * k + n + 2, 2 * k + n)
        * f(1 + k + n + rn, k - rn)
        * f(k, k + n + 1).pow((p.a + 1) as i32)
}

/// Uniform bound on `|t_{k+1}/t_k|` over all `k ≥ kk`.
fn s_tilde_ratio_bound(p: &FormParams, q: &BigRat, kk: i64) -> BigRat {
    let rn = p.r * p.n;
    let m = kk - rn;
    let x = q.abs();
    let (y, lead) = if x < one() {
        (x.clone(), s_tilde_power(p))
    } else {
        let shift = 2 + 1 + p.n + 2 * rn - (p.a + 1) * (p.n + 1);
        (x.recip(), s_tilde_power(p) + shift)
    };
    let ym = rat_pow(&y, m);
    let fudge = ((one() + &ym) / (one() - &ym)).pow((p.a + 3) as i32);
    rat_pow(&x, lead) * fudge
}

fn s_tilde_ratio_bound_ln(p: &FormParams, q: &BigRat, kk: i64) -> f64 {
    let rn = p.r * p.n;
    let m = (kk - rn) as f64;
    let lx = ln_abs(q);
    let (ly, lead) = if lx < 0.0 {
        (lx, s_tilde_power(p))
    } else {
        (-lx, s_tilde_power(p) + 3 + p.n + 2 * rn - (p.a + 1) * (p.n + 1))
    };
    let ym = (m * ly).exp();
    lead as f64 * lx + (p.a + 3) as f64 * ((1.0 + ym) / (1.0 - ym)).ln()
}

/// `S̃ₙ(q)` for rational `q` with `|q| ≠ 1`.
///
/// The tail after index `K` is bounded by `|t_K| ρ/(1-ρ)` where `ρ` is a
/// uniform bound on the term ratio for `k ≥ K`, computed exactly.
pub fn eval_s_tilde(p: &FormParams, q: &BigRat, prec: u32) -> Result<IntervalValue, NumericsError> {
    p.validate()?;
    check_off_circle(q)?;
    let rn = p.r * p.n;
    let k0 = rn + 1;
    let first = IntervalValue::from_rat(&s_tilde_term(p, q, k0), prec);
    let scale = first.mag();
    let mut current = first.clone();
    let term = |k: i64| {
        if k > k0 {
            let r = IntervalValue::from_rat(&s_tilde_ratio(p, q, k - 1), prec);
            current = current.mul(&r);
        }
        current.clone()
    };
    let estimate = |k: i64, t: &IntervalValue| {
        let lr = s_tilde_ratio_bound_ln(p, q, k);
        if lr.is_nan() || lr >= -1e-9 {
            return f64::INFINITY;
        }
        let rho = lr.exp();
        ln_abs(t.mid()) + lr - (1.0 - rho).ln()
    };
    let tail = |k: i64, t: &IntervalValue| {
        let rho = s_tilde_ratio_bound(p, q, k);
        if rho >= one() {
            return None;
        }
        Some(t.mag() * &rho / (one() - rho))
    };
    let tol = move |_: &IntervalValue| &scale * two_pow(-(prec as i64) - 4);
    certified_sum(prec, k0, term, estimate, tail, tol)
}

/// Checks `½|t_{rn+1}| ≤ |S̃ₙ(q)| ≤ (3/2)|t_{rn+1}|` with certified bounds.
pub fn first_term_sandwich(p: &FormParams, q: &BigRat, prec: u32) -> Result<bool, NumericsError> {
    let s = eval_s_tilde(p, q, prec)?;
    let t = s_tilde_term(p, q, p.r * p.n + 1).abs();
    let half = BigRat::new(BigInt::one(), BigInt::from(2));
    let three_halves = BigRat::new(BigInt::from(3), BigInt::from(2));
    Ok(s.mig() >= &t * half && s.mag() <= t * three_halves)
}

/// Enclosure of `S̃ₙ(1/q) + q^{n(r-1)} S̃ₙ(q)`, which vanishes identically.
pub fn s_tilde_functional_residual(p: &FormParams, q: &BigRat, prec: u32) -> Result<IntervalValue, NumericsError> {
    check_off_circle(q)?;
    let inv = eval_s_tilde(p, &q.recip(), prec)?;
    let direct = eval_s_tilde(p, q, prec)?;
    Ok(inv.add(&direct.mul_rat(&rat_pow(q, p.n * (p.r - 1)))))
}

/// `Z_s(q) = Σ_k q^k / (1 - q^k)^s` for `0 < |q| < 1`.
pub fn z_s(s: i64, q: &BigRat, prec: u32) -> Result<IntervalValue, NumericsError> {
    if s < 1 {
        return Err(NumericsError::Domain(format!("Z_s needs s >= 1, got {s}")));
    }
    check_inside(q)?;
    let y = q.abs();
    let ly = ln_abs(&y);
    let qb = IntervalValue::exact(q.clone(), prec);
    let one_b = IntervalValue::from_int(1, prec);
    let mut qk = one_b.clone();
    let term = |_: i64| {
        qk = qk.mul(&qb);
        qk.div(&one_b.sub(&qk).powi(s as u32))
            .expect("1 - q^k is bounded away from 0")
    };
    let estimate = |k: i64, _: &IntervalValue| (k + 1) as f64 * ly - (1.0 - ly.exp()).ln() + 1.0;
    let tail = |k: i64, _: &IntervalValue| {
        let yk = rat_pow(&y, k + 1);
        Some(yk.clone() / ((one() - &y) * (one() - yk).pow(s as i32)))
    };
    certified_sum(prec, 1, term, estimate, tail, absolute_tol(prec))
}

/// `Z_s(1/q) = Σ_k p^k / (1 - p^k)^s` with `p = 1/q`, `|p| > 1`, `s ≥ 2`.
pub fn z_s_reciprocal(s: i64, q: &BigRat, prec: u32) -> Result<IntervalValue, NumericsError> {
    if s < 2 {
        return Err(NumericsError::Domain("Z_s(1/q) diverges for s < 2".into()));
    }
    check_inside(q)?;
    let y = q.abs();
    let ly = ln_abs(&y);
    let qb = IntervalValue::exact(q.clone(), prec);
    let one_b = IntervalValue::from_int(1, prec);
    let sign = if s % 2 == 0 { 1 } else { -1 };
    let mut qk = one_b.clone();
    let term = |_: i64| {
        qk = qk.mul(&qb);
        // p^k/(1-p^k)^s = (-1)^s q^{k(s-1)} / (1-q^k)^s
        let num = qk.powi((s - 1) as u32).mul_rat(&int(sign));
        num.div(&one_b.sub(&qk).powi(s as u32))
            .expect("1 - q^k is bounded away from 0")
    };
    let estimate = |k: i64, _: &IntervalValue| {
        (k + 1) as f64 * (s - 1) as f64 * ly - (1.0 - ((s - 1) as f64 * ly).exp()).ln() + 1.0
    };
    let tail = |k: i64, _: &IntervalValue| {
        let yk = rat_pow(&y, k + 1);
        let lead = rat_pow(&y, (k + 1) * (s - 1));
        Some(lead / ((one() - rat_pow(&y, s - 1)) * (one() - yk).pow(s as i32)))
    };
    certified_sum(prec, 1, term, estimate, tail, absolute_tol(prec))
}

/// Enclosure of `Z_s(q) - Z_s(1/q) - (2/(s-1)!) Σ_{j odd, 3 ≤ j ≤ s} c(s-1, j-1) ζ_q(j)`.
pub fn z_s_identity_check(s: i64, q: &BigRat, prec: u32) -> Result<IntervalValue, NumericsError> {
    if s < 2 {
        return Err(NumericsError::Domain("the Z_s difference diverges for s = 1".into()));
    }
    let lhs = z_s(s, q, prec)?.sub(&z_s_reciprocal(s, q, prec)?);
    let fact: BigInt = (1..s).map(BigInt::from).product();
    let mut rhs = IntervalValue::zero(prec);
    for j in (3..=s).step_by(2) {
        let c = stirling_unsigned(s - 1, j - 1).expect("valid Stirling indices");
        let w = BigRat::new(c * 2, fact.clone());
        rhs = rhs.add(&zeta_q(j, q, prec)?.mul_rat(&w));
    }
    Ok(lhs.sub(&rhs))
}

/// Bernoulli numbers `B_0..=B_m` (convention `B_1 = -1/2`).
pub fn bernoulli_numbers(m: usize) -> Vec<BigRat> {
    let mut b: Vec<BigRat> = vec![one()];
    for i in 1..=m {
        let mut acc = BigRat::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += BigRat::from_integer(binomial(i as i64 + 1, k as i64)) * bk;
        }
        b.push(-acc / int(i as i64 + 1));
    }
    b
}

pub fn bernoulli(m: usize) -> BigRat {
    bernoulli_numbers(m).pop().expect("non-empty")
}

/// `E_{2m}(q) = 1 - (4m / B_{2m}) ζ_q(2m)`.
pub fn eisenstein(m: i64, q: &BigRat, prec: u32) -> Result<IntervalValue, NumericsError> {
    if m < 1 {
        return Err(NumericsError::Domain(format!("eisenstein needs m >= 1, got {m}")));
    }
    let b = bernoulli(2 * m as usize);
    let w = int(4 * m) / b;
    Ok(zeta_q(2 * m, q, prec)?.mul_rat(&-w).add_rat(&one()))
}

/// Enclosure of `S̃ₙ(q) - P̂₀(q) - Σ_j P̂ⱼ(q) ζ_q(j)`.
pub fn linear_form_residual(form: &LinearForm, q: &BigRat, prec: u32) -> Result<IntervalValue, NumericsError> {
    check_inside(q)?;
    let eval = |f: &crate::exact_algebra::RatFunc| f.eval(q).ok_or(NumericsError::Pole);
    let mut acc = eval_s_tilde(&form.params, q, prec)?.add_rat(&-eval(&form.p_hat_0)?);
    for (j, pj) in &form.p_hat_odd {
        let c = eval(pj)?;
        if !c.is_zero() {
            acc = acc.sub(&zeta_q(*j, q, prec)?.mul_rat(&c));
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat;

    #[test]
    fn zeta_one_half() {
        let z = zeta_q(1, &rat(1, 2), 128).unwrap();
        assert!((z.to_f64() - 1.606_695_152_415_291_8).abs() < 1e-15);
        assert!(z.rad_log2() < -120.0);
    }

    #[test]
    fn divisor_sum_agrees() {
        for s in 1..=4 {
            let a = zeta_q(s, &rat(1, 3), 128).unwrap();
            let b = zeta_q_divisor_sum(s, &rat(1, 3), 60, 128).unwrap();
            assert!(a.overlaps(&b), "s={s}");
        }
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_numbers(6);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[6], rat(1, 42));
        assert!(b[3].is_zero() && b[5].is_zero());
    }

    #[test]
    fn first_terms_vanish() {
        let p = FormParams::new(6, 1, 3).unwrap();
        for k in 1..=3 {
            assert!(s_tilde_term(&p, &rat(1, 2), k).is_zero());
        }
        assert!(!s_tilde_term(&p, &rat(1, 2), 4).is_zero());
    }

    #[test]
    fn ratio_matches_terms() {
        let p = FormParams::new(4, 1, 2).unwrap();
        let q = rat(-1, 3);
        for k in 3..8 {
            let r = s_tilde_term(&p, &q, k + 1) / s_tilde_term(&p, &q, k);
            assert_eq!(r, s_tilde_ratio(&p, &q, k));
        }
    }

    #[test]
    fn n_zero_is_zeta3() {
        let p = FormParams::new(4, 1, 0).unwrap();
        let s = eval_s_tilde(&p, &rat(1, 2), 128).unwrap();
        let z = zeta_q(3, &rat(1, 2), 128).unwrap();
        assert!(s.sub(&z).contains_zero());
    }
}
