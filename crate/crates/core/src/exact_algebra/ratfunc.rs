use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{rat_pow, AlgebraError, BigRat, IntPoly, LaurentPoly};

/// Rational function in `q` over the rationals, kept in canonical form
/// `scale * numerator / denominator`.
///
/// Numerator and denominator are coprime primitive integer polynomials with
/// positive leading coefficients; all rational content lives in `scale`.
/// Zero is `0 * 1 / 1`. Equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: IntPoly,
    den: IntPoly,
    scale: BigRat,
}

/// Target rings for [`RatFunc::laurent_membership`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LaurentRing {
    /// `Z[q, 1/q]`
    ZqInvq,
    /// `Z[1/q]`
    ZInvq,
    /// `Z[q]`
    Zq,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: IntPoly::zero(),
            den: IntPoly::one(),
            scale: BigRat::zero(),
        }
    }

    pub fn one() -> Self {
        Self::from_rat(BigRat::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_rat(BigRat::from_integer(BigInt::from(c)))
    }

    pub fn from_rat(c: BigRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc {
            num: IntPoly::one(),
            den: IntPoly::one(),
            scale: c,
        }
    }

    /// The variable `q`.
    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(k: i64) -> Self {
        let mono = IntPoly::monomial(BigInt::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            RatFunc {
                num: mono,
                den: IntPoly::one(),
                scale: BigRat::one(),
            }
        } else {
            RatFunc {
                num: IntPoly::one(),
                den: mono,
                scale: BigRat::one(),
            }
        }
    }

    pub fn from_poly(p: &IntPoly) -> Self {
        Self::from_parts(p.clone(), IntPoly::one())
    }

    pub fn from_laurent(l: &LaurentPoly) -> Self {
        let (p, shift) = l.to_poly_shifted();
        &Self::from_poly(&p) * &Self::q_pow(shift)
    }

    /// Canonical `num / den`. Panics if `den` is zero.
    pub fn from_parts(num: IntPoly, den: IntPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = IntPoly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        Self::from_coprime_parts(num, den, BigRat::one())
    }

    /// Canonicalizes `scale * num / den` where `num` and `den` are already coprime.
    pub(crate) fn from_coprime_parts(num: IntPoly, den: IntPoly, scale: BigRat) -> Self {
        if num.is_zero() || scale.is_zero() {
            return Self::zero();
        }
        let (cn, pn) = num.primitive_split();
        let (cd, pd) = den.primitive_split();
        RatFunc {
            num: pn,
            den: pd,
            scale: scale * BigRat::new(cn, cd),
        }
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.den
    }

    pub fn scale(&self) -> &BigRat {
        &self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree() == Some(0) && self.den.degree() == Some(0) || self.is_zero()
    }

    /// Value as a rational constant, if the function is constant.
    pub fn as_constant(&self) -> Option<BigRat> {
        self.is_constant().then(|| self.scale.clone())
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroDivisor);
        }
        Ok(RatFunc {
            num: self.den.clone(),
            den: self.num.clone(),
            scale: self.scale.recip(),
        })
    }

    pub fn checked_div(&self, o: &RatFunc) -> Result<Self, AlgebraError> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, AlgebraError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        if base.is_zero() {
            return Ok(if e == 0 { Self::one() } else { Self::zero() });
        }
        Ok(RatFunc {
            num: base.num.pow(e),
            den: base.den.pow(e),
            scale: num_traits::pow(base.scale.clone(), e as usize),
        })
    }

    pub fn scale_by(&self, c: &BigRat) -> Self {
        if c.is_zero() || self.is_zero() {
            return Self::zero();
        }
        RatFunc {
            num: self.num.clone(),
            den: self.den.clone(),
            scale: &self.scale * c,
        }
    }

    /// Evaluates at a rational point; `None` at a pole.
    pub fn eval(&self, x: &BigRat) -> Option<BigRat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(&self.scale * self.num.eval(x) / d)
    }

    /// The function `f(1/q)`.
    pub fn invert_variable(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let dn = self.num.degree().unwrap() as i64;
        let dd = self.den.degree().unwrap() as i64;
        let base = Self::from_coprime_parts(self.num.reversed(), self.den.reversed(), self.scale.clone());
        &base * &Self::q_pow(dd - dn)
    }

    /// Membership in `Z[q,1/q]`, `Z[1/q]` or `Z[q]`, with the Laurent witness on success.
    pub fn laurent_membership(&self, ring: LaurentRing) -> Option<LaurentPoly> {
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        // denominator must be a monomial q^k (primitive, positive => coefficient 1)
        let dv = self.den.q_valuation();
        if self.den.degree() != Some(dv) {
            return None;
        }
        if !self.scale.is_integer() {
            return None;
        }
        let c = self.scale.to_integer();
        let witness = LaurentPoly::from_poly_shifted(&self.num.scale(&c), -(dv as i64));
        let ok = match ring {
            LaurentRing::ZqInvq => true,
            LaurentRing::ZInvq => witness.max_exp().unwrap() <= 0,
            LaurentRing::Zq => witness.min_exp().unwrap() >= 0,
        };
        ok.then_some(witness)
    }

    /// Exact value as `(integer numerator, integer denominator)` polynomials.
    pub fn to_integer_parts(&self) -> (IntPoly, IntPoly) {
        (self.num.scale(self.scale.numer()), self.den.scale(self.scale.denom()))
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let g = IntPoly::gcd(&self.den, &o.den);
        let (da, db) = if g.is_one() {
            (self.den.clone(), o.den.clone())
        } else {
            (self.den.exact_div(&g).unwrap(), o.den.exact_div(&g).unwrap())
        };
        let l = self.scale.denom().lcm(o.scale.denom());
        let ca = self.scale.numer() * (&l / self.scale.denom());
        let cb = o.scale.numer() * (&l / o.scale.denom());
        let num = &(&self.num * &db).scale(&ca) + &(&o.num * &da).scale(&cb);
        if num.is_zero() {
            return RatFunc::zero();
        }
        let den = &(&da * &db) * &g;
        // any common factor must divide g
        let h = if g.is_one() {
            IntPoly::one()
        } else {
            IntPoly::gcd(&num, &g)
        };
        let (num, den) = if h.is_one() {
            (num, den)
        } else {
            (num.exact_div(&h).unwrap(), den.exact_div(&h).unwrap())
        };
        RatFunc::from_coprime_parts(num, den, BigRat::new(BigInt::one(), l))
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        let g1 = IntPoly::gcd(&self.num, &o.den);
        let g2 = IntPoly::gcd(&o.num, &self.den);
        let cut = |p: &IntPoly, g: &IntPoly| {
            if g.is_one() {
                p.clone()
            } else {
                p.exact_div(g).unwrap()
            }
        };
        let num = &cut(&self.num, &g1) * &cut(&o.num, &g2);
        let den = &cut(&self.den, &g2) * &cut(&o.den, &g1);
        RatFunc::from_coprime_parts(num, den, &self.scale * &o.scale)
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero; see [`RatFunc::checked_div`].
    fn div(self, o: &RatFunc) -> RatFunc {
        self.checked_div(o).expect("zero divisor")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: self.num.clone(),
            den: self.den.clone(),
            scale: -&self.scale,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, o: RatFunc) -> RatFunc {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let s = &self.scale;
        let num = self.num.scale(s.numer());
        let den = self.den.scale(s.denom());
        if den.is_one() {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/({den})")
        }
    }
}

impl RatFunc {
    /// `q^k` power helper used in tests and serialization: a rational constant times `q^k`.
    pub fn monomial(c: BigRat, k: i64) -> Self {
        Self::q_pow(k).scale_by(&c)
    }

    /// Numeric sign at `q -> 0+`, used by [`fmt`] helpers.
    pub fn leading_sign(&self) -> i32 {
        if self.scale.is_positive() {
            1
        } else if self.scale.is_negative() {
            -1
        } else {
            0
        }
    }

    /// Rational value at `q = x` raised to the integer power `e`.
    pub fn eval_pow(&self, x: &BigRat, e: i64) -> Option<BigRat> {
        self.eval(x).map(|v| rat_pow(&v, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::from_parts(p(n), p(d))
    }

    #[test]
    fn telescoping_sum_is_constant() {
        // q/(q-1) + (-1)/(q-1) = 1
        let a = rf(&[0, 1], &[-1, 1]);
        let b = rf(&[-1], &[-1, 1]);
        assert_eq!(&a + &b, RatFunc::one());
    }

    #[test]
    fn exact_cancellation() {
        // (q^2-1)/(q-1) = q+1
        let a = RatFunc::from_poly(&p(&[-1, 0, 1]));
        let b = RatFunc::from_poly(&p(&[-1, 1]));
        assert_eq!(&a / &b, RatFunc::from_poly(&p(&[1, 1])));
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        let a = rf(&[1, 1], &[1, -1]);
        let b = rf(&[1, -1], &[1, 1]);
        assert_eq!(&a * &b, RatFunc::one());
    }

    #[test]
    fn zero_divisor_is_an_error() {
        let a = RatFunc::q();
        assert_eq!(a.checked_div(&RatFunc::zero()), Err(AlgebraError::ZeroDivisor));
        assert_eq!(AlgebraError::ZeroDivisor.to_string(), "zero divisor");
    }

    #[test]
    fn canonical_form_normalizes_content_and_sign() {
        let a = rf(&[2, 4], &[-6, -6]);
        assert_eq!(a.numerator(), &p(&[1, 2]));
        assert_eq!(a.denominator(), &p(&[1, 1]));
        assert_eq!(a.scale(), &BigRat::new((-1).into(), 3.into()));
    }

    #[test]
    fn membership_examples() {
        // (q^3 - 1)/q^3 in Z[1/q] with witness 1 - q^-3
        let f = rf(&[-1, 0, 0, 1], &[0, 0, 0, 1]);
        let w = f.laurent_membership(LaurentRing::ZInvq).unwrap();
        assert_eq!(w, LaurentPoly::from_terms([(0, 1.into()), (-3, (-1).into())]));
        assert!(f.laurent_membership(LaurentRing::Zq).is_none());
        // (q^2+1)/(q-1) in none
        let g = rf(&[1, 0, 1], &[-1, 1]);
        for ring in [LaurentRing::ZqInvq, LaurentRing::ZInvq, LaurentRing::Zq] {
            assert!(g.laurent_membership(ring).is_none());
        }
        // non-integral content fails
        let h = RatFunc::q().scale_by(&BigRat::new(1.into(), 2.into()));
        assert!(h.laurent_membership(LaurentRing::ZqInvq).is_none());
    }

    #[test]
    fn invert_variable_roundtrip() {
        let f = rf(&[0, 1, 2], &[3, 0, 0, 1]);
        let g = f.invert_variable();
        // f(1/q) = (1/q + 2/q^2)/(3 + 1/q^3) = (q^2 + 2q)/(3q^3 + 1)
        assert_eq!(g, rf(&[0, 2, 1], &[1, 0, 0, 3]));
        assert_eq!(g.invert_variable(), f);
    }

    #[test]
    fn eval_at_rational() {
        let f = rf(&[1, 1], &[1, -1]);
        let half = BigRat::new(1.into(), 2.into());
        assert_eq!(f.eval(&half), Some(BigRat::from_integer(3.into())));
        assert_eq!(f.eval(&BigRat::one()), None);
    }
}
