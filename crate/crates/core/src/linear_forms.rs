//! Partial-fraction coefficients of the very-well-poised series and the
//! resulting linear form in odd q-zeta values.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_algebra::{AlgebraError, BigRat, CycloFrac, Jet, RatFunc};
use crate::io::RatFuncJson;
use crate::qtoolkit::{q_factorial, stirling_unsigned};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `(A, r, n)` with `A` even, `r >= 1` and `A - 2r > 0`; these force `A >= 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FormParams {
    #[serde(rename = "A")]
    pub a: i64,
    pub r: i64,
    pub n: i64,
}

impl FormParams {
    pub fn new(a: i64, r: i64, n: i64) -> Result<Self, FormError> {
        let p = FormParams { a, r, n };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), FormError> {
        let FormParams { a, r, n } = *self;
        if a <= 0 || a % 2 != 0 {
            return Err(FormError::InvalidParams(format!("A = {a} must be even and positive")));
        }
        if r < 1 {
            return Err(FormError::InvalidParams(format!("r = {r} must be at least 1")));
        }
        if a - 2 * r <= 0 {
            return Err(FormError::InvalidParams(format!(
                "A - 2r = {} must be positive",
                a - 2 * r
            )));
        }
        if n < 0 {
            return Err(FormError::InvalidParams(format!("n = {n} must be non-negative")));
        }
        Ok(())
    }

    /// Exponent of `T` in the rational function: `(A-2r)n/2 + A/2 - 2`.
    pub fn t_exponent(&self) -> i64 {
        let twice = (self.a - 2 * self.r) * self.n + self.a - 4;
        assert!(twice % 2 == 0, "half-integer exponent");
        twice / 2
    }

    /// Total degree in `T` of the rational function.
    pub fn rtilde_degree(&self) -> i64 {
        let FormParams { a, r, n } = *self;
        self.t_exponent() + 2 * r * n - a * (n + 1)
    }

    /// Odd indices `3, 5, ..., A-1` of the zeta values in the form.
    pub fn odd_indices(&self) -> Vec<i64> {
        (3..self.a).step_by(2).collect()
    }
}

/// `q^-j - q^-x = q^-j (1 - q^(j-x))`.
fn gap(j: i64, x: i64) -> CycloFrac {
    CycloFrac::q_pow(-j).times(&CycloFrac::one_minus_q_pow(j - x))
}

/// Linear factors `(c_i + eps)^{p_i}` and the constant prefactor of
/// `R(T) (T - q^-j)^A` around `T = q^-j`.
fn rtilde_factors(p: &FormParams, j: i64) -> (Vec<(CycloFrac, i64)>, CycloFrac) {
    let FormParams { a, r, n } = *p;
    let mut factors = Vec::new();
    let mut lead =
        CycloFrac::q_pow(-a * n * (n + 1) / 2).times(&q_factorial(n as usize).pow(a - 2 * r).expect("factorial power"));
    factors.push((CycloFrac::q_pow(-j), p.t_exponent()));
    for k in 0..r * n {
        // 1 - q^m T = -q^m (T - q^-m)
        for m in [k - r * n, n + 1 + k] {
            lead = lead.times(&CycloFrac::q_pow(m).negated());
            factors.push((gap(j, m), 1));
        }
    }
    for i in 0..=n {
        if i != j {
            factors.push((gap(j, i), -a));
        }
    }
    (factors, lead)
}

/// Jet in `eps = T - q^-j` of `R(T) (T - q^-j)^A`.
pub fn rtilde_local_jet(p: &FormParams, j: i64, order: usize) -> Result<Jet<CycloFrac>, FormError> {
    p.validate()?;
    if j < 0 || j > p.n {
        return Err(FormError::InvalidParams(format!("j = {j} outside 0..={}", p.n)));
    }
    let (factors, lead) = rtilde_factors(p, j);
    Ok(Jet::product_of_powers(&factors, order)?.scalar_mul(&lead))
}

/// Value of `R(T)` at a rational point `T` for rational `q`, by direct substitution.
pub fn rtilde_value(p: &FormParams, t: &BigRat, q: &BigRat) -> Option<BigRat> {
    use crate::exact_algebra::rat_pow;
    use num_traits::{One, Zero};
    let FormParams { a, r, n } = *p;
    let one = BigRat::one();
    let mut num = rat_pow(t, p.t_exponent()) * rat_pow(q, -a * n * (n + 1) / 2);
    let mut qn = one.clone();
    for i in 1..=n {
        qn *= &one - rat_pow(q, i);
    }
    num *= rat_pow(&qn, a - 2 * r);
    for k in 0..r * n {
        num *= &one - rat_pow(q, k - r * n) * t;
        num *= &one - rat_pow(q, n + 1 + k) * t;
    }
    let mut den = one.clone();
    for i in 0..=n {
        den *= rat_pow(&(t - rat_pow(q, -i)), a);
    }
    if den.is_zero() {
        None
    } else {
        Some(num / den)
    }
}

/// Partial-fraction coefficients `c[s][j]` for `s = 1..=A`, `j = 0..=n`.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    pub params: FormParams,
    c: Vec<Vec<CycloFrac>>,
}

impl CoefficientTable {
    pub fn c(&self, s: i64, j: i64) -> &CycloFrac {
        &self.c[(s - 1) as usize][j as usize]
    }

    pub fn c_ratfunc(&self, s: i64, j: i64) -> RatFunc {
        self.c(s, j).to_ratfunc()
    }

    /// `d[s][j] = (-1)^s q^{js} c[s][j]`.
    pub fn d(&self, s: i64, j: i64) -> CycloFrac {
        let v = CycloFrac::q_pow(j * s).times(self.c(s, j));
        if s % 2 == 0 {
            v
        } else {
            v.negated()
        }
    }
}

pub fn coefficients(p: &FormParams) -> Result<CoefficientTable, FormError> {
    p.validate()?;
    let a = p.a as usize;
    let jets: Vec<Jet<CycloFrac>> = (0..=p.n)
        .into_par_iter()
        .map(|j| rtilde_local_jet(p, j, a - 1))
        .collect::<Result<_, _>>()?;
    let c = (1..=a)
        .map(|s| jets.iter().map(|jet| jet.coeff(a - s).clone()).collect())
        .collect();
    Ok(CoefficientTable { params: *p, c })
}

/// Coefficients in `z` of `P_s(z, q) = (-1)^s sum_j q^{j(s-1)} c[s][j] z^j`.
pub fn p_tilde_s(t: &CoefficientTable, s: i64) -> Vec<CycloFrac> {
    assert!(s >= 1 && s <= t.params.a, "s out of range");
    (0..=t.params.n)
        .map(|j| {
            let v = CycloFrac::q_pow(j * (s - 1)).times(t.c(s, j));
            if s % 2 == 0 {
                v
            } else {
                v.negated()
            }
        })
        .collect()
}

pub fn eval_z_at_one(poly: &[CycloFrac]) -> CycloFrac {
    poly.iter().fold(CycloFrac::zero(), |acc, c| acc.plus(c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Base {
    Q,
    InvQ,
}

/// `P_0(1, q)` or `P_0(1, 1/q)`.
pub fn p_tilde_0_at_1(t: &CoefficientTable, base: Base) -> CycloFrac {
    let FormParams { a, n, .. } = t.params;
    let mut total = CycloFrac::zero();
    for s in 1..=a {
        // suffix sums over j >= k of q^{j(s-1)} c[s][j]
        let mut suffix = CycloFrac::zero();
        let mut acc = CycloFrac::zero();
        for k in (1..=n).rev() {
            suffix = suffix.plus(&CycloFrac::q_pow(k * (s - 1)).times(t.c(s, k)));
            let w = CycloFrac::q_pow(k)
                .times(&CycloFrac::one_minus_q_pow(k).pow(-s).unwrap())
                .times(&suffix);
            acc = acc.plus(&w);
        }
        total = if s % 2 == 0 {
            total.plus(&acc)
        } else {
            total.minus(&acc)
        };
    }
    match base {
        Base::Q => total,
        Base::InvQ => total.invert_variable(),
    }
}

/// `[d/dz P_1(z, q)]_{z=1} = -sum_j j c[1][j]`.
pub fn p1_derivative_at_1(t: &CoefficientTable) -> CycloFrac {
    (0..=t.params.n)
        .fold(CycloFrac::zero(), |acc, j| {
            acc.plus(&t.c(1, j).scaled(&BigRat::from_integer(j.into())))
        })
        .negated()
}

/// The rational part `P_0 = p0_q + p0_inverse_term - p1_derivative`, where
/// `p0_q = -P_0(1, q)` and `p0_inverse_term = q^{-n(r-1)} P_0(1, 1/q)`.
#[derive(Clone, Debug)]
pub struct P0Parts {
    pub p0_q: CycloFrac,
    pub p0_inverse_term: CycloFrac,
    pub p1_derivative: CycloFrac,
}

/// `S_n(q) = P_0 + sum_{j odd} P_j zeta_q(j)` with exact coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm {
    pub params: FormParams,
    pub p_hat_0: RatFunc,
    pub p_hat_odd: BTreeMap<i64, RatFunc>,
}

/// A linear form together with its factored coefficients and intermediate data.
#[derive(Clone, Debug)]
pub struct FormBuild {
    pub form: LinearForm,
    pub table: CoefficientTable,
    pub parts: P0Parts,
    pub p_hat_0: CycloFrac,
    pub p_hat_odd: BTreeMap<i64, CycloFrac>,
}

pub fn build_linear_form(p: &FormParams) -> Result<LinearForm, FormError> {
    Ok(build_linear_form_detailed(p)?.form)
}

pub fn build_linear_form_detailed(p: &FormParams) -> Result<FormBuild, FormError> {
    let table = coefficients(p)?;
    Ok(assemble(table))
}

/// `2 c(s-1, j-1) / (s-1)!`.
pub fn zeta_weight(s: i64, j: i64) -> BigRat {
    let fact: BigInt = (1..s).map(BigInt::from).product();
    BigRat::new(2 * stirling_unsigned(s - 1, j - 1).unwrap(), fact)
}

pub fn assemble(table: CoefficientTable) -> FormBuild {
    let p = table.params;
    let p0_q = p_tilde_0_at_1(&table, Base::Q).negated();
    let p0_inverse_term = CycloFrac::q_pow(-p.n * (p.r - 1)).times(&p_tilde_0_at_1(&table, Base::InvQ));
    let p1_derivative = p1_derivative_at_1(&table);
    let p_hat_0 = p0_q.plus(&p0_inverse_term).minus(&p1_derivative);
    let at_one: Vec<CycloFrac> = (1..=p.a).map(|s| eval_z_at_one(&p_tilde_s(&table, s))).collect();
    let mut p_hat_odd = BTreeMap::new();
    for j in p.odd_indices() {
        let mut acc = CycloFrac::zero();
        for s in j..=p.a {
            acc = acc.plus(&at_one[(s - 1) as usize].scaled(&zeta_weight(s, j)));
        }
        p_hat_odd.insert(j, acc);
    }
    let form = LinearForm {
        params: p,
        p_hat_0: p_hat_0.to_ratfunc(),
        p_hat_odd: p_hat_odd.iter().map(|(j, v)| (*j, v.to_ratfunc())).collect(),
    };
    FormBuild {
        form,
        table,
        parts: P0Parts {
            p0_q,
            p0_inverse_term,
            p1_derivative,
        },
        p_hat_0,
        p_hat_odd,
    }
}

/// `sum_j c[1][j]`, which vanishes since the rational function has degree at most `-2`.
pub fn residue_sum(t: &CoefficientTable) -> CycloFrac {
    (0..=t.params.n).fold(CycloFrac::zero(), |acc, j| acc.plus(t.c(1, j)))
}

/// Checks `c[s][n-j](1/q) = q^{n(s+r-2)} c[s][j](q)` for every entry.
pub fn coefficient_symmetry_holds(t: &CoefficientTable) -> bool {
    let FormParams { a, r, n } = t.params;
    (1..=a)
        .all(|s| (0..=n).all(|j| t.c(s, n - j).invert_variable() == CycloFrac::q_pow(n * (s + r - 2)).times(t.c(s, j))))
}

/// Checks `P_s(1/z, 1/q) = z^-n q^{n(r-1)} P_s(z, q)` coefficientwise.
pub fn functional_equation_holds(t: &CoefficientTable, s: i64) -> bool {
    let FormParams { r, n, .. } = t.params;
    let coefs = p_tilde_s(t, s);
    let w = CycloFrac::q_pow(n * (r - 1));
    (0..=n as usize).all(|j| coefs[j].invert_variable() == w.times(&coefs[n as usize - j]))
}

/// `R(q^m)` as an exact value, for `m > rn` so that no factor vanishes.
pub fn rtilde_at_q_power(p: &FormParams, m: i64) -> CycloFrac {
    let FormParams { a, r, n } = *p;
    let mut v = CycloFrac::q_pow(m * p.t_exponent() - a * n * (n + 1) / 2)
        .times(&q_factorial(n as usize).pow(a - 2 * r).unwrap());
    for k in 0..r * n {
        v = v
            .times(&CycloFrac::one_minus_q_pow(k - r * n + m))
            .times(&CycloFrac::one_minus_q_pow(n + 1 + k + m));
    }
    for i in 0..=n {
        // q^m - q^-i = -q^-i (1 - q^{m+i})
        let f = CycloFrac::q_pow(-i).times(&CycloFrac::one_minus_q_pow(m + i)).negated();
        v = v.times(&f.pow(-a).unwrap());
    }
    v
}

/// Compares `sum_{s,j} c[s][j] / (T - q^-j)^s` with `R(T)` at enough points
/// `T = q^m` to pin down the polynomial identity after clearing denominators.
pub fn reconstruction_holds(t: &CoefficientTable) -> bool {
    let p = t.params;
    let FormParams { a, r, n } = p;
    let degree = (a * (n + 1) - 1).max(p.t_exponent() + 2 * r * n);
    (r * n + 1..=r * n + degree + 1).all(|m| {
        let mut lhs = CycloFrac::zero();
        for j in 0..=n {
            let gap = CycloFrac::q_pow(-j).times(&CycloFrac::one_minus_q_pow(m + j)).negated();
            let inv = gap.try_inv().unwrap();
            let mut pw = CycloFrac::one();
            for s in 1..=a {
                pw = pw.times(&inv);
                lhs = lhs.plus(&t.c(s, j).times(&pw));
            }
        }
        lhs == rtilde_at_q_power(&p, m)
    })
}

/// Serialized form: coefficient maps with decimal-string big integers.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LinearFormJson {
    pub schema: String,
    #[serde(rename = "A")]
    pub a: i64,
    pub r: i64,
    pub n: i64,
    pub p_hat_0: RatFuncJson,
    pub p_hat: BTreeMap<String, RatFuncJson>,
}

pub const LINEAR_FORM_SCHEMA: &str = "qzeta-linear-form/1";

impl LinearForm {
    pub fn to_json(&self) -> LinearFormJson {
        LinearFormJson {
            schema: LINEAR_FORM_SCHEMA.to_string(),
            a: self.params.a,
            r: self.params.r,
            n: self.params.n,
            p_hat_0: RatFuncJson::from_ratfunc(&self.p_hat_0),
            p_hat: self
                .p_hat_odd
                .iter()
                .map(|(j, v)| (j.to_string(), RatFuncJson::from_ratfunc(v)))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat;

    #[test]
    fn params_validation() {
        assert!(FormParams::new(4, 1, 2).is_ok());
        assert!(FormParams::new(5, 1, 2).is_err());
        assert!(FormParams::new(4, 2, 2).is_err());
        assert!(FormParams::new(4, 0, 2).is_err());
        assert!(FormParams::new(2, 1, 0).is_err());
    }

    #[test]
    fn degree_formula() {
        for (a, r, n) in [(4, 1, 0), (4, 1, 3), (6, 2, 2), (8, 3, 1)] {
            let p = FormParams::new(a, r, n).unwrap();
            assert_eq!(p.rtilde_degree(), -(n + 1) * (a - 2 * r) / 2 - r - 2);
        }
    }

    /// `R(T) (T - q^-j)^A` at `T = q^-j`, with the pole factor left out of the product.
    fn cleared_value(p: &FormParams, j: i64, q: &BigRat) -> BigRat {
        use crate::exact_algebra::rat_pow;
        let FormParams { a, r, n } = *p;
        let t = rat_pow(q, -j);
        let one = rat(1, 1);
        let mut v = rat_pow(&t, p.t_exponent()) * rat_pow(q, -a * n * (n + 1) / 2);
        for i in 1..=n {
            v *= rat_pow(&(&one - rat_pow(q, i)), a - 2 * r);
        }
        for k in 0..r * n {
            v *= &one - rat_pow(q, k - r * n) * &t;
            v *= &one - rat_pow(q, n + 1 + k) * &t;
        }
        for i in (0..=n).filter(|&i| i != j) {
            v /= rat_pow(&(&t - rat_pow(q, -i)), a);
        }
        v
    }

    #[test]
    fn constant_term_matches_substitution() {
        let p = FormParams::new(4, 1, 2).unwrap();
        let q = rat(2, 7);
        for j in 0..=2 {
            let jet = rtilde_local_jet(&p, j, 0).unwrap();
            assert_eq!(jet.coeff(0).eval(&q).unwrap(), cleared_value(&p, j, &q));
            let t = crate::exact_algebra::rat_pow(&q, -j);
            assert!(rtilde_value(&p, &t, &q).is_none());
        }
    }

    #[test]
    fn n_zero_form() {
        let f = build_linear_form(&FormParams::new(4, 1, 0).unwrap()).unwrap();
        assert!(f.p_hat_0.is_zero());
        assert_eq!(f.p_hat_odd[&3], RatFunc::one());
    }
}
