use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exact_algebra::{BigRat, CycloFrac, RatFunc};
use crate::qtoolkit::{binomial, multinomial, q_binomial_factored, q_factorial};

/// The four `(A, r)` cases with closed forms for `sum_{j>=k} (1 - q^{n-2j}) e_j(1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ClosedFormCase {
    ZeroZero,
    TwoZero,
    ZeroOne,
    TwoOne,
}

impl ClosedFormCase {
    pub const ALL: [ClosedFormCase; 4] = [
        ClosedFormCase::ZeroZero,
        ClosedFormCase::TwoZero,
        ClosedFormCase::ZeroOne,
        ClosedFormCase::TwoOne,
    ];

    /// `(A, r)`.
    pub fn params(self) -> (i64, i64) {
        match self {
            ClosedFormCase::ZeroZero => (0, 0),
            ClosedFormCase::TwoZero => (2, 0),
            ClosedFormCase::ZeroOne => (0, 1),
            ClosedFormCase::TwoOne => (2, 1),
        }
    }
}

fn qb(n: i64, k: i64) -> CycloFrac {
    q_binomial_factored(n, k)
}

fn pb(n: i64, k: i64) -> CycloFrac {
    q_binomial_factored(n, k).invert_variable()
}

/// `[n; k1, k2, n-k1-k2]` in base `p = 1/q`.
fn p_trinomial(n: i64, k1: i64, k2: i64) -> CycloFrac {
    let k3 = n - k1 - k2;
    if k1 < 0 || k2 < 0 || k3 < 0 {
        return CycloFrac::zero();
    }
    let mut v = q_factorial(n as usize);
    for k in [k1, k2, k3] {
        v = v.times(&q_factorial(k as usize).try_inv().unwrap());
    }
    v.invert_variable()
}

/// `1 - p^m` with `p = 1/q`.
fn one_minus_p(m: i64) -> CycloFrac {
    CycloFrac::one_minus_q_pow(-m)
}

fn p_pow(m: i64) -> CycloFrac {
    CycloFrac::q_pow(-m)
}

/// Both sides of the q-identity, as exact values.
pub fn closed_form_sides(case: ClosedFormCase, n: i64, k: i64) -> (CycloFrac, CycloFrac) {
    let mut lhs = CycloFrac::zero();
    for j in k..=n {
        let w = CycloFrac::one_minus_q_pow(n - 2 * j);
        let term = match case {
            ClosedFormCase::ZeroZero => CycloFrac::q_pow(j),
            ClosedFormCase::TwoZero => CycloFrac::q_pow(j * (j - n + 1)).times(&qb(n, j).pow(2).unwrap()),
            ClosedFormCase::ZeroOne => CycloFrac::q_pow(j - n * (n + 1) / 2)
                .times(&qb(n + j, n))
                .times(&qb(2 * n - j, n)),
            ClosedFormCase::TwoOne => CycloFrac::q_pow(j * j + j - n * j - n * (n + 1) / 2)
                .times(&qb(n + j, n))
                .times(&qb(2 * n - j, n))
                .times(&qb(n, j).pow(2).unwrap()),
        };
        lhs = lhs.plus(&w.times(&term));
    }
    let body = match case {
        ClosedFormCase::ZeroZero => p_pow(-n)
            .times(&one_minus_p(n - k + 1))
            .times(&one_minus_p(1).try_inv().unwrap()),
        ClosedFormCase::TwoZero => p_pow(-k * (n - k + 1)).times(&pb(n, k)).times(&pb(n - 1, k - 1)),
        ClosedFormCase::ZeroOne => p_pow(-n * (n + 1) / 2)
            .times(&pb(n + k, n))
            .times(&pb(2 * n + 1 - k, n + 1)),
        ClosedFormCase::TwoOne => {
            let mut sum = CycloFrac::zero();
            for l in 0..=n - k {
                let mut t = p_pow(l * (2 * k + l - 1) / 2)
                    .times(&pb(n + k, k + l))
                    .times(&pb(n - l - 1, k - 1))
                    .times(&p_trinomial(2 * n - k - l, k, n - k));
                if l % 2 == 1 {
                    t = t.negated();
                }
                sum = sum.plus(&t);
            }
            p_pow(k * k - k * n - k - n * (n - 1) / 2).times(&sum)
        }
    };
    (lhs, one_minus_p(k).times(&body))
}

/// Both sides of the classical identity obtained as `q -> 1`.
pub fn classical_sides(case: ClosedFormCase, n: i64, k: i64) -> (BigInt, BigInt) {
    let mut lhs = BigInt::zero();
    for j in k..=n {
        let t = match case {
            ClosedFormCase::ZeroZero => BigInt::one(),
            ClosedFormCase::TwoZero => binomial(n, j).pow(2),
            ClosedFormCase::ZeroOne => binomial(n + j, n) * binomial(2 * n - j, n),
            ClosedFormCase::TwoOne => binomial(n + j, n) * binomial(2 * n - j, n) * binomial(n, j).pow(2),
        };
        lhs -= BigInt::from(n - 2 * j) * t;
    }
    let rhs = match case {
        ClosedFormCase::ZeroZero => BigInt::from(n - k + 1),
        ClosedFormCase::TwoZero => binomial(n, k) * binomial(n - 1, k - 1),
        ClosedFormCase::ZeroOne => binomial(n + k, k) * binomial(2 * n + 1 - k, n + 1),
        ClosedFormCase::TwoOne => (0..=n - k)
            .map(|l| {
                let t = binomial(n + k, k + l) * binomial(n - l - 1, k - 1) * multinomial(2 * n - k - l, &[k, n - k]);
                if l % 2 == 1 {
                    -t
                } else {
                    t
                }
            })
            .sum(),
    };
    (lhs, BigInt::from(k) * rhs)
}

/// `f / (-(1 - q))` at `q = 1`, after exact cancellation.
pub fn limit_at_one(f: &CycloFrac) -> Option<BigRat> {
    let g = f.times(&CycloFrac::one_minus_q_pow(1).negated().try_inv().unwrap());
    g.to_ratfunc().eval(&BigRat::one())
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ClosedFormCheck {
    pub case: ClosedFormCase,
    pub n: i64,
    pub k: i64,
    pub exact: bool,
    pub limit: bool,
    pub classical: bool,
}

impl ClosedFormCheck {
    pub fn pass(&self) -> bool {
        self.exact && self.limit && self.classical
    }
}

pub fn closed_form_check(case: ClosedFormCase, n: i64, k: i64) -> ClosedFormCheck {
    assert!(1 <= k && k <= n, "need 1 <= k <= n");
    let (lhs, rhs) = closed_form_sides(case, n, k);
    let (cl, cr) = classical_sides(case, n, k);
    let to_rat = |v: &BigInt| BigRat::from_integer(v.clone());
    let limit = limit_at_one(&lhs) == Some(to_rat(&cl)) && limit_at_one(&rhs) == Some(to_rat(&cr));
    ClosedFormCheck {
        case,
        n,
        k,
        exact: lhs == rhs,
        limit,
        classical: cl == cr,
    }
}

/// True iff the q-identity, its limit and the classical identity all hold.
pub fn closed_form_identities(case: ClosedFormCase, n: i64, k: i64) -> bool {
    closed_form_check(case, n, k).pass()
}

/// The left side written as a rational function, for reports.
pub fn closed_form_lhs(case: ClosedFormCase, n: i64, k: i64) -> RatFunc {
    closed_form_sides(case, n, k).0.to_ratfunc()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::denominator::{extended_params, sufficient_condition_sum};

    #[test]
    fn zero_zero_small() {
        let (l, r) = closed_form_sides(ClosedFormCase::ZeroZero, 2, 1);
        // q^2 - 1 on both sides
        let want = CycloFrac::one_minus_q_pow(2).negated();
        assert_eq!(l, want);
        assert_eq!(r, want);
    }

    #[test]
    fn all_cases_small() {
        for case in ClosedFormCase::ALL {
            for n in 1..=4 {
                for k in 1..=n {
                    let c = closed_form_check(case, n, k);
                    assert!(c.pass(), "{c:?}");
                }
            }
        }
    }

    #[test]
    fn sides_match_e_j_sums() {
        for case in ClosedFormCase::ALL {
            let (a, r) = case.params();
            for n in 1..=3 {
                let p = extended_params(a, r, n).unwrap();
                for k in 1..=n {
                    let v = sufficient_condition_sum(&p, 0, k).unwrap();
                    let (lhs, _) = closed_form_sides(case, n, k);
                    assert!(v == lhs || v == lhs.negated(), "{case:?} n={n} k={k}");
                }
            }
        }
    }
}
