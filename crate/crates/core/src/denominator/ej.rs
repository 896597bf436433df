use rayon::prelude::*;

use super::DenomError;
use crate::exact_algebra::{rat, CycloFrac, Jet};
use crate::linear_forms::{CoefficientTable, FormParams};
use crate::qtoolkit::{d_n_factored, q_factorial, Pochhammer};

/// Parameters for the `e_j(u)` family, which makes sense for any even `A >= 0`
/// and any `r >= 0`, without the positivity of `A - 2r`.
pub fn extended_params(a: i64, r: i64, n: i64) -> Result<FormParams, DenomError> {
    if a < 0 || a % 2 != 0 || r < 0 || n < 0 {
        return Err(DenomError::InvalidParams(format!("(A, r, n) = ({a}, {r}, {n})")));
    }
    Ok(FormParams { a, r, n })
}

/// `e_j(u) = sign q^{q_power} u^{u_power} (q)_n^{A-2r}
///   (q^{j+1}/u, q^{n+1-j} u)_{rn} / ((q/u)_j (qu)_{n-j})^A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EjFactorization {
    pub params: FormParams,
    pub j: i64,
    pub sign: i32,
    pub u_power: i64,
    pub q_power: i64,
    pub factorial_power: i64,
    /// Each raised to the power `-A`.
    pub denominators: [Pochhammer; 2],
    pub numerators: [Pochhammer; 2],
}

impl EjFactorization {
    pub fn new(p: &FormParams, j: i64) -> Result<Self, DenomError> {
        let FormParams { a, r, n } = *p;
        if j < 0 || j > n {
            return Err(DenomError::InvalidParams(format!("j = {j} outside 0..={n}")));
        }
        let rn = (r * n) as usize;
        Ok(EjFactorization {
            params: *p,
            j,
            sign: if (r * n) % 2 == 0 { 1 } else { -1 },
            u_power: a / 2 - 2 + (n - 2 * j) * a / 2,
            q_power: -r * n * (r * n + 1) / 2 - j * (n - j) * a / 2 + j,
            factorial_power: a - 2 * r,
            denominators: [
                Pochhammer::new(1, j as usize, -1),
                Pochhammer::new(1, (n - j) as usize, 1),
            ],
            numerators: [Pochhammer::new(j + 1, rn, -1), Pochhammer::new(n + 1 - j, rn, 1)],
        })
    }

    /// The `u`-free prefactor.
    pub fn constant(&self) -> CycloFrac {
        q_factorial(self.params.n as usize)
            .pow(self.factorial_power)
            .expect("nonzero factorial")
            .times(&CycloFrac::q_pow(self.q_power))
            .scaled(&rat(self.sign as i64, 1))
    }

    pub fn jet(&self, order: usize) -> Jet<CycloFrac> {
        let mut acc = Jet::<CycloFrac>::one_plus_eps_pow(self.u_power, order);
        for d in &self.denominators {
            let inv = d.inverse_jet(order).expect("no factor vanishes at u = 1");
            acc = acc.mul(&inv.powi(self.params.a).unwrap());
        }
        for m in &self.numerators {
            acc = acc.mul(&m.jet(order));
        }
        acc.scalar_mul(&self.constant())
    }
}

/// Jet of `e_j(u)` in `eps = u - 1`.
pub fn e_j_jet(p: &FormParams, j: i64, order: usize) -> Result<Jet<CycloFrac>, DenomError> {
    Ok(EjFactorization::new(p, j)?.jet(order))
}

/// Jets of every `e_j`, `j = 0..=n`, at a common order.
#[derive(Clone, Debug)]
pub struct EjTable {
    pub params: FormParams,
    pub jets: Vec<Jet<CycloFrac>>,
}

impl EjTable {
    pub fn new(p: &FormParams, order: usize) -> Result<Self, DenomError> {
        let jets = (0..=p.n)
            .into_par_iter()
            .map(|j| e_j_jet(p, j, order))
            .collect::<Result<_, _>>()?;
        Ok(EjTable { params: *p, jets })
    }

    pub fn e(&self, j: i64) -> &Jet<CycloFrac> {
        &self.jets[j as usize]
    }

    pub fn order(&self) -> usize {
        self.jets[0].order()
    }
}

/// Checks `[eps^{A-s}] e_j = q^{j(s-1)} c[s][j]` for all entries.
pub fn ej_matches_coefficients(e: &EjTable, t: &CoefficientTable) -> bool {
    let FormParams { a, n, .. } = t.params;
    (1..=a).all(|s| (0..=n).all(|j| *e.e(j).coeff((a - s) as usize) == CycloFrac::q_pow(j * (s - 1)).times(t.c(s, j))))
}

/// Checks `e_{n-j}(u) = u^{A-4} q^{n-2j} e_j(1/u)` as jets.
pub fn reflection_holds(e: &EjTable) -> bool {
    let FormParams { a, n, .. } = e.params;
    let k = e.order();
    (0..=n).all(|j| {
        let rhs = e
            .e(j)
            .reflect()
            .mul(&Jet::one_plus_eps_pow(a - 4, k))
            .scalar_mul(&CycloFrac::q_pow(n - 2 * j));
        rhs.same(e.e(n - j))
    })
}

/// `V_k = [eps^{A-s}] sum_{j=k}^{n} (q^{-k(s-1)} e_j(u) - (-1)^s q^{-k} e_{n-j}(u))`.
pub fn v_k(e: &EjTable, s: i64, k: i64) -> CycloFrac {
    let FormParams { a, n, .. } = e.params;
    assert!((1..=a).contains(&s) && (1..=n).contains(&k), "index out of range");
    let i = (a - s) as usize;
    let w1 = CycloFrac::q_pow(-k * (s - 1));
    let mut w2 = CycloFrac::q_pow(-k);
    if s % 2 == 1 {
        w2 = w2.negated();
    }
    (k..=n).fold(CycloFrac::zero(), |acc, j| {
        acc.plus(&w1.times(e.e(j).coeff(i)))
            .minus(&w2.times(e.e(n - j).coeff(i)))
    })
}

/// `sum_s sum_k V_k / (1 - q^-k)^s`.
pub fn v_k_assembly(e: &EjTable) -> CycloFrac {
    let FormParams { a, n, .. } = e.params;
    let mut total = CycloFrac::zero();
    for s in 1..=a {
        for k in 1..=n {
            let w = CycloFrac::one_minus_q_pow(-k).pow(-s).unwrap();
            total = total.plus(&v_k(e, s, k).times(&w));
        }
    }
    total
}

fn d_n_inv_q(n: i64, power: i64) -> CycloFrac {
    if n == 0 {
        CycloFrac::one()
    } else {
        d_n_factored(n as usize).invert_variable().pow(power).unwrap()
    }
}

/// `d_n(1/q)^{A-s} V_k` and its quotient by `1 - q^-k`, tested for membership in `Z[q, 1/q]`.
pub fn v_k_memberships(e: &EjTable, s: i64, k: i64) -> (bool, bool) {
    let FormParams { a, n, .. } = e.params;
    let v = v_k(e, s, k).times(&d_n_inv_q(n, a - s));
    let refined = v.times(&CycloFrac::one_minus_q_pow(-k).try_inv().unwrap());
    (v.to_laurent().is_some(), refined.to_laurent().is_some())
}

/// `[eps^l] sum_{j=k}^{n} (1 - q^{n-2j} u^2) e_j(u)`, from a table of order at least `l`.
pub fn sufficient_condition_from(e: &EjTable, l: usize, k: i64) -> CycloFrac {
    let n = e.params.n;
    assert!((1..=n).contains(&k) && l <= e.order(), "index out of range");
    let u2 = Jet::<CycloFrac>::one_plus_eps_pow(2, l);
    let mut acc = CycloFrac::zero();
    for j in k..=n {
        let w = Jet::one(l).sub(&u2.scalar_mul(&CycloFrac::q_pow(n - 2 * j)));
        acc = acc.plus(w.mul(&e.e(j).truncate(l)).coeff(l));
    }
    acc
}

pub fn sufficient_condition_sum(p: &FormParams, l: usize, k: i64) -> Result<CycloFrac, DenomError> {
    let e = EjTable::new(p, l)?;
    Ok(sufficient_condition_from(&e, l, k))
}

/// `d_n(1/q)^l value / (1 - q^-k) in Z[q, 1/q]`.
pub fn sufficient_condition_holds(e: &EjTable, l: usize, k: i64) -> bool {
    let v = sufficient_condition_from(e, l, k)
        .times(&d_n_inv_q(e.params.n, l as i64))
        .times(&CycloFrac::one_minus_q_pow(-k).try_inv().unwrap());
    v.to_laurent().is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear_forms::{coefficients, p_tilde_0_at_1, Base};

    #[test]
    fn links_to_partial_fractions() {
        for (a, r, n) in [(4, 1, 2), (6, 2, 2)] {
            let p = FormParams::new(a, r, n).unwrap();
            let e = EjTable::new(&p, (a - 1) as usize).unwrap();
            let t = coefficients(&p).unwrap();
            assert!(ej_matches_coefficients(&e, &t));
            assert!(reflection_holds(&e));
            let lhs = p_tilde_0_at_1(&t, Base::Q)
                .minus(&CycloFrac::q_pow(-n * (r - 1)).times(&p_tilde_0_at_1(&t, Base::InvQ)));
            assert_eq!(v_k_assembly(&e), lhs);
        }
    }

    #[test]
    fn zero_zero_case() {
        // A = r = 0, l = 0: (1 - p^k) p^-n (1 - p^{n-k+1}) / (1 - p) up to sign
        for n in 1..=4 {
            let p = extended_params(0, 0, n).unwrap();
            for k in 1..=n {
                let v = sufficient_condition_sum(&p, 0, k).unwrap();
                let rhs = CycloFrac::one_minus_q_pow(-k)
                    .times(&CycloFrac::q_pow(n))
                    .times(&CycloFrac::one_minus_q_pow(-(n - k + 1)))
                    .times(&CycloFrac::one_minus_q_pow(-1).try_inv().unwrap());
                assert!(v == rhs || v == rhs.negated(), "n={n} k={k}: {v} vs {rhs}");
            }
        }
    }
}
