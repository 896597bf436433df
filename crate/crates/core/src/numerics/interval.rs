//! Ball arithmetic over dyadic midpoints.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::exact_algebra::BigRat;

use super::NumericsError;

/// Closed ball `[mid - rad, mid + rad]`.
///
/// Midpoints are rounded to `prec` significant bits after every operation and
/// the rounding error is folded into the radius, so every operation returns
/// an enclosure of the exact result.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalValue {
    mid: BigRat,
    rad: BigRat,
    prec: u32,
}

fn pow2(e: i64) -> BigRat {
    if e >= 0 {
        BigRat::from_integer(BigInt::one() << e as usize)
    } else {
        BigRat::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

fn bit_len(x: &BigInt) -> i64 {
    x.bits() as i64
}

/// Rough base-2 magnitude: `2^(e-1) < |x| < 2^(e+1)`.
fn magnitude(x: &BigRat) -> i64 {
    bit_len(x.numer()) - bit_len(x.denom())
}

fn is_dyadic_short(x: &BigRat, bits: i64) -> bool {
    let d = x.denom();
    let tz = d.trailing_zeros().unwrap_or(0) as i64;
    bit_len(d) == tz + 1 && bit_len(x.numer()) <= bits
}

/// Nearest dyadic with `prec` significant bits plus a bound on the error.
fn round_rat(x: &BigRat, prec: u32) -> (BigRat, BigRat) {
    if x.is_zero() || is_dyadic_short(x, prec as i64 + 2) {
        return (x.clone(), BigRat::zero());
    }
    let shift = prec as i64 - magnitude(x);
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    if shift >= 0 {
        num <<= shift as usize;
    } else {
        den <<= (-shift) as usize;
    }
    let (q, r) = num.div_mod_floor(&den);
    if r.is_zero() {
        return (x.clone(), BigRat::zero());
    }
    let m = if (r << 1usize) >= den { q + 1 } else { q };
    (BigRat::new(m, BigInt::one()) * pow2(-shift), pow2(-shift - 1))
}

/// Upper bound on `r >= 0` with a short dyadic representation.
fn round_up(r: &BigRat) -> BigRat {
    if r.is_zero() || is_dyadic_short(r, 64) {
        return r.clone();
    }
    let shift = 62 - magnitude(r);
    let (mut num, mut den) = (r.numer().clone(), r.denom().clone());
    if shift >= 0 {
        num <<= shift as usize;
    } else {
        den <<= (-shift) as usize;
    }
    let m = num.div_ceil(&den);
    BigRat::new(m, BigInt::one()) * pow2(-shift)
}

/// Natural logarithm of `|x|` as a float, valid far outside the `f64` range.
pub fn ln_abs(x: &BigRat) -> f64 {
    fn ln_int(v: &BigInt) -> f64 {
        let b = bit_len(v);
        let (top, shift) = if b > 60 {
            (v.abs() >> (b - 60) as usize, b - 60)
        } else {
            (v.abs(), 0)
        };
        let t: f64 = top.to_string().parse().unwrap_or(f64::NAN);
        t.ln() + shift as f64 * std::f64::consts::LN_2
    }
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_int(x.numer()) - ln_int(x.denom())
}

fn rat_to_f64(x: &BigRat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let shift = 60 - magnitude(x);
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    if shift >= 0 {
        num <<= shift as usize;
    } else {
        den <<= (-shift) as usize;
    }
    let m: f64 = (num / den).to_string().parse().unwrap_or(f64::NAN);
    let e = -shift;
    let half = (e / 2) as i32;
    m * 2f64.powi(half) * 2f64.powi(e as i32 - half)
}

/// Scientific notation with `digits` significant digits (truncated toward zero).
pub fn sci_string(x: &BigRat, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let mut e10 = (ln_abs(x) / std::f64::consts::LN_10).floor() as i64;
    let ten = BigRat::from_integer(BigInt::from(10));
    let scaled_digits = |e10: i64| -> BigInt {
        let k = digits as i64 - 1 - e10;
        let s = if k >= 0 {
            x.abs() * num_traits::pow(ten.clone(), k as usize)
        } else {
            x.abs() / num_traits::pow(ten.clone(), (-k) as usize)
        };
        s.to_integer()
    };
    let mut m = scaled_digits(e10);
    let lo = num_traits::pow(BigInt::from(10), digits - 1);
    let hi = &lo * 10;
    if m >= hi {
        e10 += 1;
        m = scaled_digits(e10);
    } else if m < lo {
        e10 -= 1;
        m = scaled_digits(e10);
    }
    let s = m.to_string();
    let sign = if x.is_negative() { "-" } else { "" };
    let (head, tail) = s.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{e10}")
    } else {
        format!("{sign}{head}.{tail}e{e10}")
    }
}

impl IntervalValue {
    /// Exact point value; no rounding is applied to `x`.
    pub fn exact(x: BigRat, prec: u32) -> Self {
        IntervalValue {
            mid: x,
            rad: BigRat::zero(),
            prec,
        }
    }

    /// Point value rounded to `prec` bits.
    pub fn from_rat(x: &BigRat, prec: u32) -> Self {
        let (mid, rad) = round_rat(x, prec);
        IntervalValue {
            mid,
            rad: round_up(&rad),
            prec,
        }
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        Self::exact(BigRat::from_integer(BigInt::from(n)), prec)
    }

    /// Ball with given center and radius; the radius is taken as `|rad|`.
    pub fn with_radius(mid: &BigRat, rad: &BigRat, prec: u32) -> Self {
        let (m, e) = round_rat(mid, prec);
        IntervalValue {
            mid: m,
            rad: round_up(&(rad.abs() + e)),
            prec,
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact(BigRat::zero(), prec)
    }

    pub fn mid(&self) -> &BigRat {
        &self.mid
    }

    pub fn rad(&self) -> &BigRat {
        &self.rad
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn lower(&self) -> BigRat {
        &self.mid - &self.rad
    }

    pub fn upper(&self) -> BigRat {
        &self.mid + &self.rad
    }

    /// Largest absolute value in the ball.
    pub fn mag(&self) -> BigRat {
        self.mid.abs() + &self.rad
    }

    /// Smallest absolute value in the ball (0 if it straddles zero).
    pub fn mig(&self) -> BigRat {
        let m = self.mid.abs() - &self.rad;
        if m.is_negative() {
            BigRat::zero()
        } else {
            m
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn contains_rat(&self, x: &BigRat) -> bool {
        (&self.mid - x).abs() <= self.rad
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// Certified strict order: every point of `self` is below every point of `other`.
    pub fn certainly_lt(&self, other: &Self) -> bool {
        self.upper() < other.lower()
    }

    pub fn certainly_positive(&self) -> bool {
        self.lower().is_positive()
    }

    /// Three-way comparison when the balls are disjoint.
    pub fn certified_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.certainly_lt(other) {
            Some(Ordering::Less)
        } else if other.certainly_lt(self) {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.mid)
    }

    pub fn rad_f64(&self) -> f64 {
        rat_to_f64(&self.rad)
    }

    /// `log2` of the radius; `-inf` for exact values.
    pub fn rad_log2(&self) -> f64 {
        ln_abs(&self.rad) / std::f64::consts::LN_2
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        let mut v = self.clone();
        v.prec = prec;
        v
    }

    fn finish(mid: BigRat, rad: BigRat, prec: u32) -> Self {
        let (m, e) = round_rat(&mid, prec);
        IntervalValue {
            mid: m,
            rad: round_up(&(rad + e)),
            prec,
        }
    }

    fn prec_with(&self, o: &Self) -> u32 {
        self.prec.max(o.prec)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::finish(&self.mid + &o.mid, &self.rad + &o.rad, self.prec_with(o))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::finish(&self.mid - &o.mid, &self.rad + &o.rad, self.prec_with(o))
    }

    pub fn neg(&self) -> Self {
        IntervalValue {
            mid: -&self.mid,
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let rad = self.mid.abs() * &o.rad + o.mid.abs() * &self.rad + &self.rad * &o.rad;
        Self::finish(&self.mid * &o.mid, rad, self.prec_with(o))
    }

    pub fn mul_rat(&self, c: &BigRat) -> Self {
        Self::finish(&self.mid * c, &self.rad * c.abs(), self.prec)
    }

    pub fn add_rat(&self, c: &BigRat) -> Self {
        Self::finish(&self.mid + c, self.rad.clone(), self.prec)
    }

    pub fn recip(&self) -> Result<Self, NumericsError> {
        let m = self.mid.abs();
        if m <= self.rad {
            return Err(NumericsError::DivisionByZero);
        }
        let rad = &self.rad / (&m * (&m - &self.rad));
        Ok(Self::finish(self.mid.recip(), rad, self.prec))
    }

    pub fn div(&self, o: &Self) -> Result<Self, NumericsError> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut acc = Self::from_int(1, self.prec);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Enlarges the radius by `extra >= 0`.
    pub fn inflate(&self, extra: &BigRat) -> Self {
        IntervalValue {
            mid: self.mid.clone(),
            rad: round_up(&(&self.rad + extra.abs())),
            prec: self.prec,
        }
    }

    /// Enclosure of `sqrt` for a positive ball.
    pub fn sqrt(&self) -> Result<Self, NumericsError> {
        let lo = self.lower();
        if !lo.is_positive() {
            return Err(NumericsError::Domain("sqrt of a non-positive ball".into()));
        }
        let lo_s = sqrt_bound(&lo, self.prec, false);
        let hi_s = sqrt_bound(&self.upper(), self.prec, true);
        let two = BigRat::from_integer(BigInt::from(2));
        let mid = (&lo_s + &hi_s) / &two;
        let rad = (&hi_s - &lo_s) / two;
        Ok(Self::finish(mid, rad, self.prec))
    }
}

/// Dyadic lower (or upper) bound on `sqrt(x)`, accurate to about `prec` bits.
fn sqrt_bound(x: &BigRat, prec: u32, upper: bool) -> BigRat {
    let shift = 2 * (prec as i64 + 8) - magnitude(x);
    let shift = shift + (shift & 1);
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    if shift >= 0 {
        num <<= shift as usize;
    } else {
        den <<= (-shift) as usize;
    }
    let floor = num.div_floor(&den);
    let mut s = floor.sqrt();
    if upper {
        let exact = &s * &s * &den == num;
        if !exact {
            s += 1;
        }
    }
    BigRat::new(s, BigInt::one()) * pow2(-shift / 2)
}

impl fmt::Display for IntervalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.prec as f64) * std::f64::consts::LOG10_2) as usize;
        write!(
            f,
            "[{} +/- {}]",
            sci_string(&self.mid, digits.clamp(3, 40)),
            sci_string(&self.rad, 3)
        )
    }
}

#[derive(Serialize)]
struct IntervalJson {
    mid: String,
    rad: String,
    contains_zero: bool,
}

impl Serialize for IntervalValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        IntervalJson {
            mid: sci_string(&self.mid, 30),
            rad: sci_string(&self.rad, 3),
            contains_zero: self.contains_zero(),
        }
        .serialize(s)
    }
}

/// π by Machin's formula with alternating-series remainders.
pub fn pi(prec: u32) -> IntervalValue {
    let tol = pow2(-(prec as i64) - 8);
    let atan_inv = |x: i64| -> (BigRat, BigRat) {
        let x = BigInt::from(x);
        let x2 = &x * &x;
        let mut pw = x.clone();
        let mut sum = BigRat::zero();
        let mut k = 0i64;
        loop {
            let term = BigRat::new(BigInt::one(), &pw * BigInt::from(2 * k + 1));
            if term < tol {
                return (sum, term);
            }
            if k % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            pw *= &x2;
            k += 1;
        }
    };
    let (a5, r5) = atan_inv(5);
    let (a239, r239) = atan_inv(239);
    let sixteen = BigRat::from_integer(BigInt::from(16));
    let four = BigRat::from_integer(BigInt::from(4));
    let mid = &sixteen * a5 - &four * a239;
    let rad = sixteen * r5 + four * r239;
    IntervalValue::with_radius(&mid, &rad, prec)
}

pub(crate) fn two_pow(e: i64) -> BigRat {
    pow2(e)
}
