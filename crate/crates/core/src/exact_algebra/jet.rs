//! Truncated power series in a local parameter `eps`.

use num_bigint::BigInt;
use num_traits::One;

use super::{AlgebraError, BigRat, Coeff};

/// Generalized binomial coefficient `e (e-1) ... (e-m+1) / m!` for any integer `e`.
pub fn binomial_rat(e: i64, m: usize) -> BigRat {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..m as i64 {
        num *= e - i;
        den *= i + 1;
    }
    BigRat::new(num, den)
}

/// `f = sum_{i=0}^{K} a_i eps^i + O(eps^{K+1})`.
#[derive(Clone, Debug)]
pub struct Jet<F> {
    coeffs: Vec<F>,
}

impl<F: Coeff> Jet<F> {
    /// Jet from explicit coefficients; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<F>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Jet { coeffs }
    }

    pub fn constant(c: F, order: usize) -> Self {
        let mut coeffs = vec![F::zero(); order + 1];
        coeffs[0] = c;
        Jet { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::constant(F::zero(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(F::one(), order)
    }

    /// `c + eps`.
    pub fn variable(c: F, order: usize) -> Self {
        let mut j = Self::constant(c, order);
        if order >= 1 {
            j.coeffs[1] = F::one();
        }
        j
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &F {
        &self.coeffs[i]
    }

    /// Same series at a lower order.
    pub fn truncate(&self, order: usize) -> Self {
        Jet::new(self.coeffs[..=order.min(self.order())].to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Mixed orders truncate to the smaller one.
    pub fn add(&self, o: &Self) -> Self {
        let k = self.order().min(o.order());
        Jet::new((0..=k).map(|i| self.coeffs[i].plus(&o.coeffs[i])).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let k = self.order().min(o.order());
        Jet::new((0..=k).map(|i| self.coeffs[i].minus(&o.coeffs[i])).collect())
    }

    pub fn neg(&self) -> Self {
        Jet::new(self.coeffs.iter().map(|c| c.negated()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let k = self.order().min(o.order());
        let mut out = vec![F::zero(); k + 1];
        for (i, a) in self.coeffs.iter().take(k + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().take(k + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].plus(&a.times(b));
                }
            }
        }
        Jet::new(out)
    }

    pub fn scalar_mul(&self, c: &F) -> Self {
        Jet::new(self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    pub fn scale_rat(&self, c: &BigRat) -> Self {
        Jet::new(self.coeffs.iter().map(|a| a.scaled(c)).collect())
    }

    pub fn invert(&self) -> Result<Self, AlgebraError> {
        if self.coeffs[0].is_zero() {
            return Err(AlgebraError::PoleAtExpansionPoint);
        }
        let b0 = self.coeffs[0].try_inv()?;
        let mut out = vec![b0.clone()];
        for m in 1..=self.order() {
            let mut acc = F::zero();
            for i in 1..=m {
                let a = &self.coeffs[i];
                if !a.is_zero() {
                    acc = acc.plus(&a.times(&out[m - i]));
                }
            }
            out.push(acc.times(&b0).negated());
        }
        Ok(Jet::new(out))
    }

    pub fn powi(&self, e: i64) -> Result<Self, AlgebraError> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Jet::one(self.order());
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// `(c + sign*eps)^power`, by the binomial series.
    pub fn linear_factor(c: &F, sign: i32, power: i64, order: usize) -> Result<Self, AlgebraError> {
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        if c.is_zero() {
            if power < 0 {
                return Err(AlgebraError::PoleAtExpansionPoint);
            }
            let mut coeffs = vec![F::zero(); order + 1];
            if (power as usize) <= order {
                let s = if sign < 0 && power % 2 == 1 { -1 } else { 1 };
                coeffs[power as usize] = F::from_rat(&BigRat::from_integer(s.into()));
            }
            return Ok(Jet::new(coeffs));
        }
        let inv = c.try_inv()?;
        let mut cur = c.powi(power)?;
        let mut coeffs = Vec::with_capacity(order + 1);
        for m in 0..=order {
            let mut b = binomial_rat(power, m);
            if sign < 0 && m % 2 == 1 {
                b = -b;
            }
            coeffs.push(cur.scaled(&b));
            cur = cur.times(&inv);
        }
        Ok(Jet::new(coeffs))
    }

    /// `(1 + eps)^e` with rational coefficients.
    pub fn one_plus_eps_pow(e: i64, order: usize) -> Self {
        Jet::new((0..=order).map(|m| F::from_rat(&binomial_rat(e, m))).collect())
    }

    /// `log(f)` for `f` with constant term one.
    pub fn log_unit(&self) -> Result<Self, AlgebraError> {
        let k = self.order();
        let g = self.sub(&Jet::one(k));
        if !g.coeffs[0].is_zero() {
            return Err(AlgebraError::PoleAtExpansionPoint);
        }
        // L' = f'/f, so m L_m = m f_m - sum_{i=1}^{m-1} i L_i f_{m-i}
        let mut l = vec![F::zero(); k + 1];
        for m in 1..=k {
            let mut acc = self.coeffs[m].scaled(&BigRat::from_integer(m.into()));
            for (i, li) in l.iter().enumerate().take(m).skip(1) {
                let t = li.times(&self.coeffs[m - i]).scaled(&BigRat::from_integer(i.into()));
                acc = acc.minus(&t);
            }
            l[m] = acc.scaled(&BigRat::new(BigInt::one(), m.into()));
        }
        Ok(Jet::new(l))
    }

    /// `exp(L)` for `L` with zero constant term.
    pub fn exp_nilpotent(&self) -> Self {
        let k = self.order();
        assert!(self.coeffs[0].is_zero(), "exp needs a zero constant term");
        let mut e = vec![F::one()];
        for m in 1..=k {
            let mut acc = F::zero();
            for i in 1..=m {
                if !self.coeffs[i].is_zero() {
                    let t = self.coeffs[i].times(&e[m - i]).scaled(&BigRat::from_integer(i.into()));
                    acc = acc.plus(&t);
                }
            }
            e.push(acc.scaled(&BigRat::new(BigInt::one(), m.into())));
        }
        Jet::new(e)
    }

    /// `prod (c_i + eps)^{p_i}` via a single logarithmic sum.
    pub fn product_of_powers(factors: &[(F, i64)], order: usize) -> Result<Self, AlgebraError> {
        let mut lead = F::one();
        let mut log = vec![F::zero(); order + 1];
        for (c, p) in factors {
            if *p == 0 {
                continue;
            }
            if c.is_zero() {
                return Err(AlgebraError::PoleAtExpansionPoint);
            }
            lead = lead.times(&c.powi(*p)?);
            // log(1 + eps/c) = sum (-1)^{m+1} eps^m / (m c^m)
            let inv = c.try_inv()?;
            let mut pw = inv.clone();
            for (m, slot) in log.iter_mut().enumerate().skip(1) {
                let mut f = BigRat::new((*p).into(), (m as i64).into());
                if m % 2 == 0 {
                    f = -f;
                }
                *slot = slot.plus(&pw.scaled(&f));
                pw = pw.times(&inv);
            }
        }
        Ok(Jet::new(log).exp_nilpotent().scalar_mul(&lead))
    }

    /// `f(g(eps))` for an inner jet `g` with zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self, AlgebraError> {
        if !inner.coeffs[0].is_zero() {
            return Err(AlgebraError::PoleAtExpansionPoint);
        }
        let k = self.order().min(inner.order());
        let mut acc = Jet::constant(self.coeffs[k].clone(), k);
        for i in (0..k).rev() {
            acc = acc.mul(inner);
            acc.coeffs[0] = acc.coeffs[0].plus(&self.coeffs[i]);
        }
        Ok(acc)
    }

    /// Jet of `f(1/u)` from the jet of `f(u)`, both in `eps = u - 1`.
    pub fn reflect(&self) -> Self {
        let k = self.order();
        // 1/(1 + eps) - 1
        let mut inner = Jet::one_plus_eps_pow(-1, k);
        inner.coeffs[0] = F::zero();
        self.compose(&inner).expect("zero constant term")
    }

    /// Evaluates each coefficient with `f`.
    pub fn map<G: Coeff>(&self, f: impl Fn(&F) -> G) -> Jet<G> {
        Jet::new(self.coeffs.iter().map(f).collect())
    }

    pub fn same(&self, o: &Self) -> bool {
        self.order() == o.order() && self.coeffs.iter().zip(&o.coeffs).all(|(a, b)| a.same(b))
    }
}

/// `eps^val * (sum_{i < prec} a_i eps^i + O(eps^prec))` with `a_0 != 0`
/// whenever `prec > 0`. Tracks relative precision so that poles can cancel.
#[derive(Clone, Debug)]
pub struct LaurentJet<F> {
    val: i64,
    coeffs: Vec<F>,
}

impl<F: Coeff> LaurentJet<F> {
    pub fn from_jet(j: &Jet<F>) -> Self {
        Self::from_parts(0, j.coeffs.clone())
    }

    /// Exact constant with `prec` known coefficients.
    pub fn constant(c: F, prec: usize) -> Self {
        let mut coeffs = vec![F::zero(); prec];
        if prec > 0 {
            coeffs[0] = c;
        }
        Self::from_parts(0, coeffs)
    }

    pub fn from_parts(val: i64, coeffs: Vec<F>) -> Self {
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        LaurentJet {
            val: val + lead as i64,
            coeffs: coeffs[lead..].to_vec(),
        }
    }

    pub fn valuation(&self) -> i64 {
        self.val
    }

    /// Number of known coefficients from the valuation on.
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// First exponent whose coefficient is unknown.
    pub fn absolute_precision(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    /// Coefficient of `eps^i`, or `None` when beyond the known precision.
    pub fn coeff(&self, i: i64) -> Option<F> {
        if i >= self.absolute_precision() {
            None
        } else if i < self.val {
            Some(F::zero())
        } else {
            Some(self.coeffs[(i - self.val) as usize].clone())
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = self.coeffs.len().min(o.coeffs.len());
        let a = Jet::new(pad(&self.coeffs, prec));
        let b = Jet::new(pad(&o.coeffs, prec));
        let c = if prec == 0 { Vec::new() } else { a.mul(&b).coeffs };
        Self::from_parts(self.val + o.val, c[..prec].to_vec())
    }

    pub fn add(&self, o: &Self) -> Self {
        let val = self.val.min(o.val);
        let top = self.absolute_precision().min(o.absolute_precision());
        let n = (top - val).max(0) as usize;
        let coeffs = (0..n)
            .map(|i| {
                let e = val + i as i64;
                self.coeff(e).unwrap().plus(&o.coeff(e).unwrap())
            })
            .collect();
        Self::from_parts(val, coeffs)
    }

    pub fn neg(&self) -> Self {
        LaurentJet {
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| c.negated()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn invert(&self) -> Result<Self, AlgebraError> {
        if self.coeffs.is_empty() {
            return Err(AlgebraError::Precision);
        }
        let j = Jet::new(self.coeffs.clone()).invert()?;
        Ok(LaurentJet {
            val: -self.val,
            coeffs: j.coeffs,
        })
    }

    pub fn scalar_mul(&self, c: &F) -> Self {
        Self::from_parts(self.val, self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    /// Ordinary jet of the given order; fails on a pole or missing precision.
    pub fn to_jet(&self, order: usize) -> Result<Jet<F>, AlgebraError> {
        if self.absolute_precision() <= order as i64 {
            return Err(AlgebraError::Precision);
        }
        let coeffs = (0..=order as i64).map(|i| self.coeff(i).unwrap()).collect::<Vec<_>>();
        if self.val < 0 && !self.coeffs.is_empty() {
            return Err(AlgebraError::PoleAtExpansionPoint);
        }
        Ok(Jet::new(coeffs))
    }
}

fn pad<F: Coeff>(v: &[F], n: usize) -> Vec<F> {
    let mut out: Vec<F> = v.iter().take(n).cloned().collect();
    if out.is_empty() {
        out.push(F::zero());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{rat, RatFunc};

    fn r(n: i64, d: i64) -> BigRat {
        rat(n, d)
    }

    fn jet(c: &[(i64, i64)]) -> Jet<BigRat> {
        Jet::new(c.iter().map(|&(n, d)| r(n, d)).collect())
    }

    #[test]
    fn geometric_inverse() {
        let j = jet(&[(1, 1), (1, 1), (0, 1)]);
        assert!(j.invert().unwrap().same(&jet(&[(1, 1), (-1, 1), (1, 1)])));
    }

    #[test]
    fn difference_of_squares() {
        let a = jet(&[(1, 1), (1, 1), (0, 1)]);
        let b = jet(&[(1, 1), (-1, 1), (0, 1)]);
        assert!(a.mul(&b).same(&jet(&[(1, 1), (0, 1), (-1, 1)])));
    }

    #[test]
    fn symbolic_first_order_inverse() {
        let c = RatFunc::q();
        let j = Jet::variable(c.clone(), 1).invert().unwrap();
        assert_eq!(j.coeff(0), &RatFunc::q_pow(-1));
        assert_eq!(j.coeff(1), &-&RatFunc::q_pow(-2));
    }

    #[test]
    fn zero_constant_term_is_a_pole() {
        let j = jet(&[(0, 1), (1, 1)]);
        let e = j.invert().unwrap_err();
        assert_eq!(e.to_string(), "pole at expansion point");
        let e = Jet::<BigRat>::linear_factor(&r(0, 1), 1, -1, 2).unwrap_err();
        assert_eq!(e, AlgebraError::PoleAtExpansionPoint);
    }

    #[test]
    fn linear_factor_examples() {
        let sq = Jet::linear_factor(&r(1, 1), 1, 2, 2).unwrap();
        assert!(sq.same(&jet(&[(1, 1), (2, 1), (1, 1)])));
        let inv = Jet::linear_factor(&RatFunc::q(), 1, -1, 1).unwrap();
        assert_eq!(inv.coeff(0), &RatFunc::q_pow(-1));
        assert_eq!(inv.coeff(1), &-&RatFunc::q_pow(-2));
    }

    #[test]
    fn log_exp_roundtrip() {
        let f = jet(&[(1, 1), (3, 2), (-2, 5), (7, 3)]);
        let back = f.log_unit().unwrap().exp_nilpotent();
        assert!(back.same(&f));
    }

    #[test]
    fn product_of_powers_matches_direct() {
        let fac = [(r(2, 1), 3), (r(-1, 3), -2), (r(5, 7), 1)];
        let direct = fac.iter().fold(Jet::one(4), |acc, (c, p)| {
            acc.mul(&Jet::linear_factor(c, 1, *p, 4).unwrap())
        });
        let viaexp = Jet::product_of_powers(&fac, 4).unwrap();
        assert!(direct.same(&viaexp));
    }

    #[test]
    fn laurent_pole_cancels() {
        // (eps + eps^2) * eps^-1 = 1 + eps
        let a = LaurentJet::from_jet(&jet(&[(0, 1), (1, 1), (1, 1), (0, 1)]));
        let b = LaurentJet::from_jet(&jet(&[(0, 1), (1, 1), (0, 1), (0, 1)]))
            .invert()
            .unwrap();
        let c = a.mul(&b);
        assert_eq!(c.valuation(), 0);
        let j = c.to_jet(1).unwrap();
        assert!(j.same(&jet(&[(1, 1), (1, 1)])));
        // 1/eps - 1/eps = 0 to the known precision
        let d = b.sub(&b);
        assert!(d.to_jet(0).unwrap().is_zero());
    }
}
