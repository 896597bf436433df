//! q-Pochhammer symbols, Gaussian coefficients, cyclotomic data and Stirling numbers.

use std::collections::BTreeMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_algebra::{
    binomial_rat, cyclotomic_poly, AlgebraError, CycloFrac, IntPoly, Jet, LaurentJet, LaurentPoly,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QError {
    #[error("argument out of range: {0}")]
    OutOfRange(String),
}

/// `(q^a; q)_k` expanded as a Laurent polynomial.
pub fn pochhammer_poly(a: i64, k: usize) -> LaurentPoly {
    let mut acc = LaurentPoly::from_terms([(0, BigInt::one())]);
    for i in 0..k as i64 {
        let f = LaurentPoly::from_terms([(0, BigInt::one()), (a + i, -BigInt::one())]);
        acc = acc.mul(&f);
    }
    acc
}

/// `(q^a; q)_k` in factored form.
pub fn pochhammer(a: i64, k: usize) -> CycloFrac {
    (0..k as i64).fold(CycloFrac::one(), |acc, i| acc.times(&CycloFrac::one_minus_q_pow(a + i)))
}

/// `(q; q)_n` in factored form.
pub fn q_factorial(n: usize) -> CycloFrac {
    pochhammer(1, n)
}

pub fn q_binomial(n: i64, k: i64) -> Result<IntPoly, QError> {
    if n < 0 || k < 0 || k > n {
        return Err(QError::OutOfRange(format!("q_binomial({n}, {k})")));
    }
    // Pascal recurrence [n,k] = [n-1,k] + q^(n-k) [n-1,k-1] on one row
    let k = k.min(n - k) as usize;
    let mut row: Vec<IntPoly> = vec![IntPoly::one()];
    for m in 1..=n as usize {
        let mut next = Vec::with_capacity(row.len() + 1);
        for j in 0..=m.min(k) {
            let left = if j < row.len() && j < m {
                row[j].clone()
            } else {
                IntPoly::zero()
            };
            let right = if j >= 1 {
                row[j - 1].shift_up(m - j)
            } else {
                IntPoly::zero()
            };
            next.push(&left + &right);
        }
        row = next;
    }
    Ok(row[k].clone())
}

/// Gaussian multinomial `(q)_n / (prod (q)_{k_i} (q)_{n - sum k_i})`.
pub fn q_multinomial(n: i64, parts: &[i64]) -> Result<IntPoly, QError> {
    if parts.iter().any(|&p| p < 0) {
        return Err(QError::OutOfRange(format!("negative part in {parts:?}")));
    }
    let total: i64 = parts.iter().sum();
    if total > n {
        return Err(QError::OutOfRange(format!("parts {parts:?} exceed n = {n}")));
    }
    let mut acc = IntPoly::one();
    let mut left = n;
    for &p in parts {
        acc = &acc * &q_binomial(left, p)?;
        left -= p;
    }
    Ok(acc)
}

pub fn cyclotomic(t: i64) -> Result<IntPoly, QError> {
    if t < 1 {
        return Err(QError::OutOfRange(format!("cyclotomic index {t}")));
    }
    Ok((*cyclotomic_poly(t as u32)).clone())
}

/// `d_n(q) = prod_{t=1}^{n} phi_t(q)`, the monic lcm of `q - 1, ..., q^n - 1`.
pub fn d_n(n: i64) -> Result<IntPoly, QError> {
    if n < 1 {
        return Err(QError::OutOfRange(format!("d_n index {n}")));
    }
    Ok((1..=n as u32).fold(IntPoly::one(), |acc, t| &acc * &*cyclotomic_poly(t)))
}

/// `d_n(q)` in factored form; `d_0 = 1`.
pub fn d_n_factored(n: usize) -> CycloFrac {
    (1..=n as u32).fold(CycloFrac::one(), |acc, t| acc.times(&CycloFrac::cyclotomic_pow(t, 1)))
}

/// `d_n(1/q)` in factored form.
pub fn d_n_inverse(n: usize) -> CycloFrac {
    d_n_factored(n).invert_variable()
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    crate::exact_algebra::cyclo_totient(n)
}

/// Order of `phi_t` in `prod (1 - q^m)^{mult}`.
pub fn cyclotomic_valuation(factors: &[(u64, i64)], t: u64) -> i64 {
    factors
        .iter()
        .filter(|(m, _)| t == 1 || m % t == 0)
        .map(|(_, e)| e)
        .sum()
}

/// Multiplicities of cyclotomic polynomials in a rational function.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CyclotomicFactorization {
    pub multiplicities: BTreeMap<u64, i64>,
}

impl CyclotomicFactorization {
    /// From a list of `(m, multiplicity)` standing for `(1 - q^m)^multiplicity`.
    pub fn from_binomials(factors: &[(u64, i64)]) -> Self {
        let mut out = Self::default();
        for &(m, e) in factors {
            for d in (1..=m).filter(|d| m % d == 0) {
                *out.multiplicities.entry(d).or_insert(0) += e;
            }
        }
        out.multiplicities.retain(|_, e| *e != 0);
        out
    }

    pub fn valuation(&self, t: u64) -> i64 {
        self.multiplicities.get(&t).copied().unwrap_or(0)
    }

    pub fn merge(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (d, e) in &o.multiplicities {
            *out.multiplicities.entry(*d).or_insert(0) += e;
        }
        out.multiplicities.retain(|_, e| *e != 0);
        out
    }
}

fn stirling_table() -> &'static RwLock<Vec<Vec<BigInt>>> {
    static T: OnceLock<RwLock<Vec<Vec<BigInt>>>> = OnceLock::new();
    T.get_or_init(|| RwLock::new(vec![vec![BigInt::one()]]))
}

/// Unsigned Stirling number of the first kind: `x (x+1) ... (x+s-1) = sum c(s,j) x^j`.
pub fn stirling_unsigned(s: i64, j: i64) -> Result<BigInt, QError> {
    if s < 1 || j < 1 || j > s {
        return Err(QError::OutOfRange(format!("stirling({s}, {j})")));
    }
    let s = s as usize;
    {
        let t = stirling_table().read().unwrap();
        if t.len() > s {
            return Ok(t[s][j as usize].clone());
        }
    }
    let mut t = stirling_table().write().unwrap();
    while t.len() <= s {
        // multiply the previous rising factorial by (x + m)
        let m = t.len() - 1;
        let prev = t[m].clone();
        let mut next = vec![BigInt::zero(); prev.len() + 1];
        for (i, c) in prev.iter().enumerate() {
            next[i + 1] += c;
            next[i] += c * BigInt::from(m);
        }
        t.push(next);
    }
    Ok(t[s][j as usize].clone())
}

/// `(x; base)_k` with `x = q^a u^e` and `base = q^step`, for jets in `u - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pochhammer {
    pub base_exponent: i64,
    pub length: usize,
    pub u_power: i64,
    pub step: i64,
}

impl Pochhammer {
    pub fn new(base_exponent: i64, length: usize, u_power: i64) -> Self {
        Pochhammer {
            base_exponent,
            length,
            u_power,
            step: 1,
        }
    }

    /// Same symbol in base `q^step` (use `-1` for base `1/q`).
    pub fn in_base(self, step: i64) -> Self {
        Pochhammer { step, ..self }
    }

    fn factor_exponents(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.length as i64).map(move |i| self.base_exponent + self.step * i)
    }

    /// Value at `u = 1`.
    pub fn at_one(&self) -> CycloFrac {
        self.factor_exponents()
            .fold(CycloFrac::one(), |acc, c| acc.times(&CycloFrac::one_minus_q_pow(c)))
    }

    /// Number of factors vanishing at `u = 1`.
    pub fn zeros_at_one(&self) -> usize {
        self.factor_exponents().filter(|&c| c == 0).count()
    }

    /// Jet of `prod (1 - q^c u^e)` in `eps = u - 1`.
    pub fn jet(&self, order: usize) -> Jet<CycloFrac> {
        let mut acc = Jet::one(order);
        for c in self.factor_exponents() {
            acc = acc.mul(&single_factor_jet(c, self.u_power, order));
        }
        acc
    }

    /// Laurent jet with `prec` known coefficients past the valuation.
    pub fn laurent_jet(&self, prec: usize) -> LaurentJet<CycloFrac> {
        let z = self.zeros_at_one();
        LaurentJet::from_parts(0, self.jet(prec + z - 1).into_coeffs())
    }

    /// Jet of the reciprocal; fails when a factor vanishes at `u = 1`.
    pub fn inverse_jet(&self, order: usize) -> Result<Jet<CycloFrac>, AlgebraError> {
        let mut acc = Jet::one(order);
        for c in self.factor_exponents() {
            acc = acc.mul(&single_factor_jet(c, self.u_power, order).invert()?);
        }
        Ok(acc)
    }
}

/// `1 - q^c (1 + eps)^e`.
pub fn single_factor_jet(c: i64, e: i64, order: usize) -> Jet<CycloFrac> {
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(CycloFrac::one_minus_q_pow(c));
    let qc = CycloFrac::q_pow(c);
    for m in 1..=order {
        let b = binomial_rat(e, m);
        coeffs.push(qc.scaled(&-b));
    }
    Jet::new(coeffs)
}

/// Ordinary binomial coefficient as a big integer (zero outside `0 <= k <= n`).
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    binomial_rat(n, k as usize).to_integer()
}

/// `(q)_n / ((q)_k (q)_{n-k})` as a factored value, allowing the formal zero outside range.
pub fn q_binomial_factored(n: i64, k: i64) -> CycloFrac {
    if k < 0 || n < 0 || k > n {
        return CycloFrac::zero();
    }
    let (n, k) = (n as usize, k as usize);
    q_factorial(n)
        .times(&q_factorial(k).try_inv().unwrap())
        .times(&q_factorial(n - k).try_inv().unwrap())
}

/// Ordinary multinomial `n! / (prod k_i! (n - sum k_i)!)`, zero when a part is negative.
pub fn multinomial(n: i64, parts: &[i64]) -> BigInt {
    let mut acc = BigInt::one();
    let mut left = n;
    for &p in parts {
        let b = binomial(left, p);
        if b.is_zero() {
            return b;
        }
        acc *= b;
        left -= p;
    }
    if left < 0 {
        BigInt::zero()
    } else {
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(
            pochhammer_poly(1, 2),
            LaurentPoly::from_poly_shifted(&p(&[1, -1, -1, 1]), 0)
        );
        assert!(pochhammer_poly(0, 3).is_zero());
        let direct = LaurentPoly::from_terms([(0, 1.into()), (-2, (-1).into())])
            .mul(&LaurentPoly::from_terms([(0, 1.into()), (-1, (-1).into())]));
        assert_eq!(pochhammer_poly(-2, 2), direct);
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(q_binomial(2, 1).unwrap(), p(&[1, 1]));
        assert_eq!(q_binomial(4, 2).unwrap(), p(&[1, 1, 2, 1, 1]));
        assert_eq!(q_binomial(7, 0).unwrap(), p(&[1]));
        assert!(q_binomial(3, 4).is_err());
        let ratio = q_factorial(4)
            .times(&q_factorial(2).pow(-2).unwrap())
            .to_laurent()
            .unwrap();
        assert_eq!(ratio, LaurentPoly::from_poly_shifted(&q_binomial(4, 2).unwrap(), 0));
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(q_multinomial(5, &[2]).unwrap(), q_binomial(5, 2).unwrap());
        let m = q_multinomial(3, &[1, 1]).unwrap();
        let oracle = q_factorial(3).times(&q_factorial(1).pow(-3).unwrap());
        assert_eq!(CycloFrac::from_poly(&m), oracle);
        assert_eq!(q_multinomial(6, &[0, 0, 0]).unwrap(), p(&[1]));
        assert!(q_multinomial(3, &[2, 2]).is_err());
    }

    #[test]
    fn cyclotomic_and_dn() {
        assert_eq!(cyclotomic(1).unwrap(), p(&[-1, 1]));
        assert_eq!(cyclotomic(6).unwrap(), p(&[1, -1, 1]));
        assert_eq!(cyclotomic(4).unwrap(), p(&[1, 0, 1]));
        assert!(cyclotomic(0).is_err());
        assert_eq!(d_n(1).unwrap(), p(&[-1, 1]));
        let d3 = &(&p(&[-1, 1]) * &p(&[1, 1])) * &p(&[1, 1, 1]);
        assert_eq!(d_n(3).unwrap(), d3);
        assert!(d_n(0).is_err());
    }

    #[test]
    fn valuations() {
        let f: Vec<(u64, i64)> = (1..=5).map(|l| (l, 1)).collect();
        assert_eq!(cyclotomic_valuation(&f, 2), 2);
        assert_eq!(cyclotomic_valuation(&[(6, 1)], 4), 0);
        assert_eq!(cyclotomic_valuation(&f, 1), 5);
        let fac = CyclotomicFactorization::from_binomials(&f);
        assert_eq!(fac.valuation(2), 2);
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling_unsigned(3, 2).unwrap(), BigInt::from(3));
        assert_eq!(stirling_unsigned(3, 1).unwrap(), BigInt::from(2));
        for s in 1..=8 {
            assert_eq!(stirling_unsigned(s, s).unwrap(), BigInt::one());
            let fact: i64 = (1..s).product();
            assert_eq!(stirling_unsigned(s, 1).unwrap(), BigInt::from(fact));
        }
        assert!(stirling_unsigned(3, 0).is_err());
        assert!(stirling_unsigned(2, 3).is_err());
    }

    #[test]
    fn pochhammer_jet_constant_term() {
        let ph = Pochhammer::new(1, 3, -1);
        assert_eq!(ph.jet(2).coeff(0), &pochhammer(1, 3));
        let p2 = Pochhammer::new(2, 2, 1).in_base(-1);
        // (1 - q^2)(1 - q)
        assert_eq!(p2.at_one(), pochhammer(1, 2));
    }
}
