//! Dense univariate polynomials over the integers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::BigRat;

/// Dense polynomial in `q` with arbitrary-precision integer coefficients,
/// stored lowest degree first. The zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

const MOD_P: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MOD_P as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn reduce_mod(c: &BigInt) -> u64 {
    let m = BigInt::from(MOD_P);
    c.mod_floor(&m).to_u64().unwrap()
}

/// Degree of gcd(a mod p, b mod p), or `None` when p divides a leading coefficient.
fn gcd_degree_mod_p(a: &IntPoly, b: &IntPoly) -> Option<usize> {
    let to_mod = |p: &IntPoly| -> Vec<u64> { p.coeffs.iter().map(reduce_mod).collect() };
    let mut x = to_mod(a);
    let mut y = to_mod(b);
    if *x.last()? == 0 || *y.last()? == 0 {
        return None;
    }
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        // x <- x mod y
        let inv_lc = powmod(*y.last().unwrap(), MOD_P - 2);
        while x.len() >= y.len() {
            let lead = *x.last().unwrap();
            if lead != 0 {
                let f = mulmod(lead, inv_lc);
                let off = x.len() - y.len();
                for (i, &c) in y.iter().enumerate() {
                    let t = mulmod(f, c);
                    x[off + i] = (x[off + i] + MOD_P - t) % MOD_P;
                }
            }
            x.pop();
            trim(&mut x);
            if x.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
    Some(x.len() - 1)
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * q^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPoly { coeffs }
    }

    /// `1 - q^m` for `m >= 0`.
    pub fn one_minus_q_pow(m: usize) -> Self {
        if m == 0 {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); m + 1];
        coeffs[0] = BigInt::one();
        coeffs[m] = -BigInt::one();
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Multiplicity of `q` as a factor (0 for the zero polynomial).
    pub fn q_valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Multiply by `q^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    /// Divide by `q^k`; the low `k` coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.q_valuation() >= k || self.is_zero());
        IntPoly::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Exact division of every coefficient by `c`.
    pub fn div_scalar_exact(&self, c: &BigInt) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|x| x / c).collect(),
        }
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Splits into `(c, p)` with `self = c * p`, `p` primitive with positive leading coefficient.
    pub fn primitive_split(&self) -> (BigInt, IntPoly) {
        if self.is_zero() {
            return (BigInt::zero(), IntPoly::zero());
        }
        let mut c = self.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        if c.is_one() {
            return (c, self.clone());
        }
        (c.clone(), self.div_scalar_exact(&c))
    }

    pub fn primitive_part(&self) -> IntPoly {
        self.primitive_split().1
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = IntPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `q^deg * p(1/q)`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPoly::new(c)
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        let mut acc = BigRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRat::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Exact quotient `self / d` over the integers, or `None` if `d` does not divide.
    pub fn exact_div(&self, d: &IntPoly) -> Option<IntPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let dd = d.degree().unwrap();
        let sd = self.degree().unwrap();
        if sd < dd {
            return None;
        }
        let lc = d.leading().unwrap();
        let monic = lc.is_one();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); sd - dd + 1];
        for i in (0..=sd - dd).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let f = if monic {
                top.clone()
            } else {
                let (f, r) = top.div_rem(lc);
                if !r.is_zero() {
                    return None;
                }
                f
            };
            for (k, c) in d.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    rem[i + k] -= &f * c;
                }
            }
            quot[i] = f;
        }
        if rem[..dd].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::new(quot))
    }

    /// Pseudo-remainder `lc(d)^(deg self - deg d + 1) * self mod d`.
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("pseudo_rem by zero");
        let mut rem = self.coeffs.clone();
        let lc = d.leading().unwrap().clone();
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.last().unwrap().clone();
            let off = rem.len() - 1 - dd;
            if !lc.is_one() {
                for c in rem.iter_mut() {
                    *c *= &lc;
                }
            }
            for (k, c) in d.coeffs.iter().enumerate() {
                rem[off + k] -= &top * c;
            }
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        IntPoly::new(rem)
    }

    /// Primitive gcd with positive leading coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
        if a.is_zero() {
            return b.primitive_part();
        }
        if b.is_zero() {
            return a.primitive_part();
        }
        let va = a.q_valuation();
        let vb = b.q_valuation();
        let v = va.min(vb);
        let a = a.shift_down(va).primitive_part();
        let b = b.shift_down(vb).primitive_part();
        let g = Self::gcd_nonzero_const(&a, &b);
        g.shift_up(v)
    }

    fn gcd_nonzero_const(a: &IntPoly, b: &IntPoly) -> IntPoly {
        let (big, small) = if a.degree() >= b.degree() { (a, b) } else { (b, a) };
        if small.degree() == Some(0) {
            return IntPoly::one();
        }
        if let Some(dg) = gcd_degree_mod_p(big, small) {
            if dg == 0 {
                return IntPoly::one();
            }
            if Some(dg) == small.degree() && big.exact_div(small).is_some() {
                return small.clone();
            }
        }
        // primitive pseudo-remainder sequence
        let mut x = big.clone();
        let mut y = small.clone();
        while !y.is_zero() {
            if y.degree() == Some(0) {
                return IntPoly::one();
            }
            let r = x.pseudo_rem(&y);
            x = y;
            y = r.primitive_part();
        }
        x.primitive_part()
    }

    /// Signed coefficients as `i64`, for diagnostics and tests.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }
}

impl<'a> Add<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn add(self, o: &IntPoly) -> IntPoly {
        let (long, short) = if self.coeffs.len() >= o.coeffs.len() {
            (self, o)
        } else {
            (o, self)
        };
        let mut c = long.coeffs.clone();
        for (i, x) in short.coeffs.iter().enumerate() {
            c[i] += x;
        }
        IntPoly::new(c)
    }
}

impl<'a> Sub<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn sub(self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut c = self.coeffs.clone();
        c.resize(n, BigInt::zero());
        for (i, x) in o.coeffs.iter().enumerate() {
            c[i] -= x;
        }
        IntPoly::new(c)
    }
}

impl<'a> Mul<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn mul(self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    c[i + j] += x * y;
                }
            }
        }
        IntPoly::new(c)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{abs}*q")?,
                (_, true) => write!(f, "q^{i}")?,
                (_, false) => write!(f, "{abs}*q^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn trims_leading_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
    }

    #[test]
    fn exact_division() {
        // (q^2 - 1) / (q - 1) = q + 1
        assert_eq!(p(&[-1, 0, 1]).exact_div(&p(&[-1, 1])), Some(p(&[1, 1])));
        assert_eq!(p(&[1, 0, 1]).exact_div(&p(&[-1, 1])), None);
        assert_eq!(p(&[2, 2]).exact_div(&p(&[2])), Some(p(&[1, 1])));
        assert_eq!(p(&[3, 2]).exact_div(&p(&[2])), None);
    }

    #[test]
    fn gcd_examples() {
        let a = &p(&[-1, 1]) * &p(&[1, 1, 1]);
        let b = &p(&[-1, 1]) * &p(&[1, 0, 1]);
        assert_eq!(IntPoly::gcd(&a, &b), p(&[-1, 1]));
        assert_eq!(IntPoly::gcd(&p(&[0, 0, 6]), &p(&[0, 4])), p(&[0, 1]));
        assert_eq!(IntPoly::gcd(&p(&[1, 1]), &p(&[1, 2])), IntPoly::one());
        // non-monic common factor forces the PRS path
        let f = p(&[3, 2]);
        let a = &f * &p(&[5, 0, 7]);
        let b = &f * &(&p(&[1, 1]) * &p(&[1, 1]));
        assert_eq!(IntPoly::gcd(&a, &b), f);
    }

    #[test]
    fn reversed_and_eval() {
        let a = p(&[1, 2, 3]);
        assert_eq!(a.reversed(), p(&[3, 2, 1]));
        assert_eq!(a.eval_int(&BigInt::from(2)), BigInt::from(17));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -1, 0, 2]).to_string(), "2*q^3 - q + 1");
    }
}
