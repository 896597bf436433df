//! Cyclotomic polynomials and rational functions with factored cyclotomic
//! denominators.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{rat_pow, AlgebraError, BigRat, IntPoly, LaurentPoly, RatFunc};

struct CycloEntry {
    poly: Arc<IntPoly>,
    at_two: BigInt,
}

fn cache() -> &'static RwLock<HashMap<u32, Arc<CycloEntry>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<CycloEntry>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn entry(t: u32) -> Arc<CycloEntry> {
    assert!(t >= 1, "cyclotomic index must be positive");
    if let Some(e) = cache().read().unwrap().get(&t) {
        return e.clone();
    }
    // q^t - 1 divided by every proper cyclotomic divisor
    let mut p = IntPoly::one_minus_q_pow(t as usize).scale(&BigInt::from(-1));
    for d in 1..t {
        if t.is_multiple_of(d) {
            p = p.exact_div(&entry(d).poly).expect("cyclotomic division");
        }
    }
    let at_two = p.eval_int(&BigInt::from(2));
    let e = Arc::new(CycloEntry {
        poly: Arc::new(p),
        at_two,
    });
    // a concurrent writer computes the same value, so either insertion wins
    cache().write().unwrap().entry(t).or_insert(e).clone()
}

/// The `t`-th cyclotomic polynomial (cached).
pub fn cyclotomic_poly(t: u32) -> Arc<IntPoly> {
    entry(t).poly.clone()
}

pub fn totient(mut n: u64) -> u64 {
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// Removes as many factors `phi_d` from `p` as possible, returning the count.
fn strip_cyclotomic(p: &mut IntPoly, d: u32, limit: Option<u32>) -> u32 {
    let e = entry(d);
    let mut count = 0;
    let mut at_two = p.eval_int(&BigInt::from(2));
    while limit.is_none_or(|l| count < l) {
        if p.degree().unwrap_or(0) < e.poly.degree().unwrap() {
            break;
        }
        if d == 1 {
            if !p.eval_int(&BigInt::one()).is_zero() {
                break;
            }
        } else if !at_two.is_multiple_of(&e.at_two) {
            break;
        }
        match p.exact_div(&e.poly) {
            Some(quot) => {
                *p = quot;
                at_two /= &e.at_two;
                count += 1;
            }
            None => break,
        }
    }
    count
}

/// Writes `p` as `sign * prod phi_d^e_d` if it is such a product.
pub(crate) fn factor_cyclotomic(p: &IntPoly) -> Option<(i32, BTreeMap<u32, i32>)> {
    let mut rest = p.clone();
    if rest.is_zero() || rest.q_valuation() > 0 {
        return None;
    }
    let mut out = BTreeMap::new();
    let deg = rest.degree().unwrap() as u64;
    // phi(d) >= sqrt(d/2), so larger d cannot divide
    let bound = 2 * deg * deg + 2;
    let mut d = 1u64;
    while d <= bound && rest.degree().unwrap() > 0 {
        if totient(d) <= rest.degree().unwrap() as u64 {
            let c = strip_cyclotomic(&mut rest, d as u32, None);
            if c > 0 {
                out.insert(d as u32, c as i32);
            }
        }
        d += 1;
    }
    if rest.degree() != Some(0) {
        return None;
    }
    let c = rest.coeff(0);
    if c.is_one() {
        Some((1, out))
    } else if c == -BigInt::one() {
        Some((-1, out))
    } else {
        None
    }
}

fn cyclo_product<'a, I: IntoIterator<Item = (&'a u32, i32)>>(factors: I) -> IntPoly {
    let mut acc = IntPoly::one();
    for (&d, e) in factors {
        if e > 0 {
            let f = cyclotomic_poly(d);
            acc = &acc * &f.pow(e as u32);
        }
    }
    acc
}

/// Rational function stored as `scale * q^shift * prod phi_d^e_d * rest`.
///
/// `rest` is primitive with positive leading coefficient and nonzero constant
/// term, and is coprime to every `phi_d` with `e_d < 0`. Every value whose
/// denominator is a product of `q` and cyclotomic polynomials is representable,
/// which covers all q-Pochhammer quotients. Equality is value equality.
#[derive(Clone, Debug)]
pub struct CycloFrac {
    scale: BigRat,
    shift: i64,
    cyc: BTreeMap<u32, i32>,
    rest: IntPoly,
}

impl CycloFrac {
    pub fn zero() -> Self {
        CycloFrac {
            scale: BigRat::zero(),
            shift: 0,
            cyc: BTreeMap::new(),
            rest: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_rat(BigRat::one())
    }

    pub fn from_rat(c: BigRat) -> Self {
        CycloFrac {
            scale: c,
            ..Self::zero()
        }
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_rat(BigRat::from_integer(c.into()))
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> Self {
        CycloFrac {
            shift: k,
            ..Self::one()
        }
    }

    /// `c * q^k`.
    pub fn monomial(c: BigRat, k: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        CycloFrac {
            scale: c,
            shift: k,
            ..Self::zero()
        }
    }

    /// `1 - q^m`, factored; zero for `m = 0`.
    pub fn one_minus_q_pow(m: i64) -> Self {
        if m == 0 {
            return Self::zero();
        }
        let a = m.unsigned_abs() as u32;
        let cyc = (1..=a).filter(|d| a.is_multiple_of(*d)).map(|d| (d, 1)).collect();
        if m > 0 {
            // 1 - q^a = -(q^a - 1)
            CycloFrac {
                scale: -BigRat::one(),
                shift: 0,
                cyc,
                rest: IntPoly::one(),
            }
        } else {
            // 1 - q^-a = q^-a (q^a - 1)
            CycloFrac {
                scale: BigRat::one(),
                shift: -(a as i64),
                cyc,
                rest: IntPoly::one(),
            }
        }
    }

    /// `phi_d(q)^e`.
    pub fn cyclotomic_pow(d: u32, e: i32) -> Self {
        let mut out = Self::one();
        if e != 0 {
            out.cyc.insert(d, e);
        }
        out
    }

    pub fn from_poly(p: &IntPoly) -> Self {
        if p.is_zero() {
            return Self::zero();
        }
        Self::normalize(BigRat::one(), 0, BTreeMap::new(), p.clone())
    }

    pub fn from_laurent(l: &LaurentPoly) -> Self {
        let (p, s) = l.to_poly_shifted();
        Self::from_poly(&p).times(&Self::q_pow(s))
    }

    /// Converts when the denominator is a product of `q` and cyclotomic factors.
    pub fn from_ratfunc(f: &RatFunc) -> Result<Self, AlgebraError> {
        if f.is_zero() {
            return Ok(Self::zero());
        }
        let den = f.denominator();
        let v = den.q_valuation();
        let (sign, fac) =
            factor_cyclotomic(&den.shift_down(v)).ok_or_else(|| AlgebraError::NotCyclotomic(den.to_string()))?;
        let mut scale = f.scale().clone();
        if sign < 0 {
            scale = -scale;
        }
        let cyc = fac.into_iter().map(|(d, e)| (d, -e)).collect();
        Ok(Self::normalize(scale, -(v as i64), cyc, f.numerator().clone()))
    }

    fn normalize(scale: BigRat, shift: i64, mut cyc: BTreeMap<u32, i32>, poly: IntPoly) -> Self {
        if poly.is_zero() || scale.is_zero() {
            return Self::zero();
        }
        let v = poly.q_valuation();
        let mut p = poly.shift_down(v);
        if p.degree() != Some(0) {
            let neg: Vec<(u32, i32)> = cyc.iter().filter(|(_, &e)| e < 0).map(|(&d, &e)| (d, e)).collect();
            for (d, e) in neg {
                if p.degree() == Some(0) {
                    break;
                }
                let c = strip_cyclotomic(&mut p, d, Some((-e) as u32));
                if c > 0 {
                    let slot = cyc.get_mut(&d).unwrap();
                    *slot += c as i32;
                }
            }
        }
        cyc.retain(|_, e| *e != 0);
        let (c, rest) = p.primitive_split();
        CycloFrac {
            scale: scale * BigRat::from_integer(c),
            shift: shift + v as i64,
            cyc,
            rest,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    pub fn scale(&self) -> &BigRat {
        &self.scale
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn cyclotomic_exponents(&self) -> &BTreeMap<u32, i32> {
        &self.cyc
    }

    pub fn rest(&self) -> &IntPoly {
        &self.rest
    }

    pub fn plus(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let shift = self.shift.min(o.shift);
        let mut common = BTreeMap::new();
        for d in self.cyc.keys().chain(o.cyc.keys()) {
            let ea = self.cyc.get(d).copied().unwrap_or(0);
            let eb = o.cyc.get(d).copied().unwrap_or(0);
            let m = ea.min(eb);
            if m != 0 {
                common.insert(*d, m);
            }
        }
        let part = |x: &Self| -> IntPoly {
            let extra = x.cyc.iter().map(|(d, e)| (d, e - common.get(d).copied().unwrap_or(0)));
            let extra_missing = common
                .iter()
                .filter(|(d, _)| !x.cyc.contains_key(d))
                .map(|(d, m)| (d, -m));
            let p = &cyclo_product(extra.chain(extra_missing)) * &x.rest;
            p.shift_up((x.shift - shift) as usize)
        };
        let l = self.scale.denom().lcm(o.scale.denom());
        let ca = self.scale.numer() * (&l / self.scale.denom());
        let cb = o.scale.numer() * (&l / o.scale.denom());
        let sum = &part(self).scale(&ca) + &part(o).scale(&cb);
        Self::normalize(BigRat::new(BigInt::one(), l), shift, common, sum)
    }

    pub fn times(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut cyc = self.cyc.clone();
        for (d, e) in &o.cyc {
            *cyc.entry(*d).or_insert(0) += e;
        }
        let scale = &self.scale * &o.scale;
        let shift = self.shift + o.shift;
        if self.rest.is_one() && o.rest.is_one() {
            cyc.retain(|_, e| *e != 0);
            return CycloFrac {
                scale,
                shift,
                cyc,
                rest: IntPoly::one(),
            };
        }
        Self::normalize(scale, shift, cyc, &self.rest * &o.rest)
    }

    pub fn negated(&self) -> Self {
        CycloFrac {
            scale: -&self.scale,
            ..self.clone()
        }
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }

    pub fn scaled(&self, c: &BigRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        CycloFrac {
            scale: &self.scale * c,
            ..self.clone()
        }
    }

    pub fn try_inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroDivisor);
        }
        let mut cyc: BTreeMap<u32, i32> = self.cyc.iter().map(|(d, e)| (*d, -e)).collect();
        let mut scale = self.scale.recip();
        if !self.rest.is_one() {
            let (sign, fac) =
                factor_cyclotomic(&self.rest).ok_or_else(|| AlgebraError::NotCyclotomic(self.rest.to_string()))?;
            if sign < 0 {
                scale = -scale;
            }
            for (d, e) in fac {
                *cyc.entry(d).or_insert(0) -= e;
            }
            cyc.retain(|_, e| *e != 0);
        }
        Ok(CycloFrac {
            scale,
            shift: -self.shift,
            cyc,
            rest: IntPoly::one(),
        })
    }

    pub fn pow(&self, e: i64) -> Result<Self, AlgebraError> {
        if e == 0 {
            return Ok(Self::one());
        }
        if self.rest.is_one() || e > 0 {
            let base = if e < 0 { self.try_inv()? } else { self.clone() };
            let k = e.unsigned_abs();
            return Ok(CycloFrac {
                scale: rat_pow(&base.scale, k as i64),
                shift: base.shift * k as i64,
                cyc: base.cyc.iter().map(|(d, x)| (*d, x * k as i32)).collect(),
                rest: base.rest.pow(k as u32),
            });
        }
        self.try_inv()?.pow(-e)
    }

    /// The function `f(1/q)`.
    pub fn invert_variable(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut scale = self.scale.clone();
        let mut shift = -self.shift;
        for (d, e) in &self.cyc {
            // phi_1(1/q) = -q^-1 phi_1(q); phi_d(1/q) = q^-deg phi_d(q) otherwise
            if *d == 1 {
                if e % 2 != 0 {
                    scale = -scale;
                }
                shift -= *e as i64;
            } else {
                shift -= totient(*d as u64) as i64 * *e as i64;
            }
        }
        let deg = self.rest.degree().unwrap() as i64;
        let (c, rev) = self.rest.reversed().primitive_split();
        CycloFrac {
            scale: scale * BigRat::from_integer(c),
            shift: shift - deg,
            cyc: self.cyc.clone(),
            rest: rev,
        }
    }

    /// Numerator and denominator polynomials with `value = scale * num / den`,
    /// `num` and `den` coprime.
    fn split_parts(&self) -> (IntPoly, IntPoly) {
        let num = &cyclo_product(self.cyc.iter().map(|(d, e)| (d, *e))) * &self.rest;
        let den = cyclo_product(self.cyc.iter().map(|(d, e)| (d, -e)));
        if self.shift >= 0 {
            (num.shift_up(self.shift as usize), den)
        } else {
            (num, den.shift_up((-self.shift) as usize))
        }
    }

    pub fn to_ratfunc(&self) -> RatFunc {
        if self.is_zero() {
            return RatFunc::zero();
        }
        let (num, den) = self.split_parts();
        RatFunc::from_coprime_parts(num, den, self.scale.clone())
    }

    pub fn eval(&self, x: &BigRat) -> Option<BigRat> {
        if self.is_zero() {
            return Some(BigRat::zero());
        }
        let (num, den) = self.split_parts();
        let dv = den.eval(x);
        if dv.is_zero() {
            return None;
        }
        Some(&self.scale * num.eval(x) / dv)
    }

    /// Laurent polynomial witness when the value lies in `Z[q, 1/q]`.
    pub fn to_laurent(&self) -> Option<LaurentPoly> {
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        if self.cyc.values().any(|e| *e < 0) || !self.scale.is_integer() {
            return None;
        }
        let (num, _) = self.split_parts();
        let p = num.shift_down(self.shift.max(0) as usize);
        Some(LaurentPoly::from_poly_shifted(
            &p.scale(&self.scale.to_integer()),
            self.shift,
        ))
    }

    /// Whether the value has no pole at any root of unity (ignoring `q = 0`):
    /// the cyclotomic part of the denominator is trivial.
    pub fn is_cyclotomically_integral(&self) -> bool {
        self.cyc.values().all(|e| *e >= 0)
    }

    /// Order of vanishing at the primitive `d`-th roots of unity.
    pub fn cyclotomic_order(&self, d: u32) -> i32 {
        let mut e = self.cyc.get(&d).copied().unwrap_or(0);
        if e >= 0 && !self.rest.is_one() {
            let mut p = self.rest.clone();
            e += strip_cyclotomic(&mut p, d, None) as i32;
        }
        e
    }
}

impl PartialEq for CycloFrac {
    fn eq(&self, o: &Self) -> bool {
        self.minus(o).is_zero()
    }
}

impl fmt::Display for CycloFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ratfunc())
    }
}

impl super::Coeff for CycloFrac {
    fn zero() -> Self {
        CycloFrac::zero()
    }
    fn one() -> Self {
        CycloFrac::one()
    }
    fn from_rat(c: &BigRat) -> Self {
        CycloFrac::from_rat(c.clone())
    }
    fn is_zero(&self) -> bool {
        CycloFrac::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        CycloFrac::plus(self, o)
    }
    fn times(&self, o: &Self) -> Self {
        CycloFrac::times(self, o)
    }
    fn negated(&self) -> Self {
        CycloFrac::negated(self)
    }
    fn try_inv(&self) -> Result<Self, AlgebraError> {
        CycloFrac::try_inv(self)
    }
    fn scaled(&self, c: &BigRat) -> Self {
        CycloFrac::scaled(self, c)
    }
    fn powi(&self, e: i64) -> Result<Self, AlgebraError> {
        self.pow(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(*cyclotomic_poly(1), p(&[-1, 1]));
        assert_eq!(*cyclotomic_poly(4), p(&[1, 0, 1]));
        assert_eq!(*cyclotomic_poly(6), p(&[1, -1, 1]));
        assert_eq!(*cyclotomic_poly(12), p(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn factoring_products() {
        let f = &(&*cyclotomic_poly(3) * &*cyclotomic_poly(3)) * &*cyclotomic_poly(10);
        let (s, fac) = factor_cyclotomic(&f).unwrap();
        assert_eq!(s, 1);
        assert_eq!(fac, BTreeMap::from([(3, 2), (10, 1)]));
        assert!(factor_cyclotomic(&p(&[1, 1, 1, 1, 1, 1, 1, 2])).is_none());
    }

    #[test]
    fn sum_cancels_cyclotomic_denominator() {
        // 1/(1-q) - q/(1-q) = 1
        let a = CycloFrac::one_minus_q_pow(1).try_inv().unwrap();
        let b = a.times(&CycloFrac::q_pow(1));
        let s = a.minus(&b);
        assert_eq!(s, CycloFrac::one());
        assert!(s.cyclotomic_exponents().is_empty());
        assert!(s.rest().is_one());
    }

    #[test]
    fn agrees_with_ratfunc() {
        let x = CycloFrac::one_minus_q_pow(3)
            .pow(-2)
            .unwrap()
            .plus(&CycloFrac::one_minus_q_pow(-2).scaled(&BigRat::new(3.into(), 7.into())));
        let rf = x.to_ratfunc();
        let y = CycloFrac::from_ratfunc(&rf).unwrap();
        assert_eq!(x, y);
        let half = BigRat::new(1.into(), 2.into());
        assert_eq!(x.eval(&half), rf.eval(&half));
        assert_eq!(x.invert_variable().to_ratfunc(), rf.invert_variable());
    }

    #[test]
    fn laurent_witness() {
        // (1 - q^6)/(1 - q^2) = 1 + q^2 + q^4
        let x = CycloFrac::one_minus_q_pow(6).times(&CycloFrac::one_minus_q_pow(2).try_inv().unwrap());
        let w = x.to_laurent().unwrap();
        assert_eq!(
            w,
            LaurentPoly::from_terms([(0, 1.into()), (2, 1.into()), (4, 1.into())])
        );
        assert!(CycloFrac::one_minus_q_pow(2).try_inv().unwrap().to_laurent().is_none());
    }
}
