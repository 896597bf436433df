//! Exact arithmetic: big rationals, integer polynomials, Laurent polynomials,
//! canonical rational functions in `q`, and truncated jets.

mod cyclo;
mod jet;
mod laurent;
mod poly;
mod ratfunc;

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

pub use cyclo::{cyclotomic_poly, totient as cyclo_totient, CycloFrac};
pub use jet::{binomial_rat, Jet, LaurentJet};
pub use laurent::LaurentPoly;
pub use poly::IntPoly;
pub use ratfunc::{LaurentRing, RatFunc};

/// Exact rationals with normalized sign and reduced fraction.
pub type BigRat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("zero divisor")]
    ZeroDivisor,
    #[error("pole at expansion point")]
    PoleAtExpansionPoint,
    #[error("jet orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("not a product of cyclotomic factors: {0}")]
    NotCyclotomic(String),
    #[error("insufficient precision in Laurent jet")]
    Precision,
}

pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

/// `x^e` for any integer `e`; panics on `0^e` with `e < 0`.
pub fn rat_pow(x: &BigRat, e: i64) -> BigRat {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// Field-like coefficient domain for jets and generic sums.
pub trait Coeff: Clone + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rat(c: &BigRat) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn try_inv(&self) -> Result<Self, AlgebraError>;
    fn scaled(&self, c: &BigRat) -> Self;

    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }

    /// Exact equality of values.
    fn same(&self, o: &Self) -> bool {
        self.minus(o).is_zero()
    }

    fn try_div(&self, o: &Self) -> Result<Self, AlgebraError> {
        Ok(self.times(&o.try_inv()?))
    }

    fn powi(&self, e: i64) -> Result<Self, AlgebraError> {
        let base = if e < 0 { self.try_inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.times(&b);
            }
        }
        Ok(acc)
    }
}

impl Coeff for BigRat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rat(c: &BigRat) -> Self {
        c.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn try_inv(&self) -> Result<Self, AlgebraError> {
        if Zero::is_zero(self) {
            Err(AlgebraError::ZeroDivisor)
        } else {
            Ok(self.recip())
        }
    }
    fn scaled(&self, c: &BigRat) -> Self {
        self * c
    }
    fn same(&self, o: &Self) -> bool {
        self == o
    }
}

impl Coeff for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn from_rat(c: &BigRat) -> Self {
        RatFunc::from_rat(c.clone())
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn try_inv(&self) -> Result<Self, AlgebraError> {
        self.inv()
    }
    fn scaled(&self, c: &BigRat) -> Self {
        self.scale_by(c)
    }
    fn same(&self, o: &Self) -> bool {
        self == o
    }
}
