use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::exact_algebra::{rat, BigRat, CycloFrac, LaurentPoly, RatFunc};
use crate::linear_forms::{FormBuild, FormParams};
use crate::qtoolkit::d_n_factored;

/// Exponents of `q^{floor(alpha n^2 + beta n + gamma)} d_n(1/q)^{d_power}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenominatorSpec {
    pub alpha: BigRat,
    pub beta_prime: BigRat,
    pub gamma_prime: BigRat,
    pub beta: BigRat,
    pub gamma: BigRat,
    pub d_power: i64,
    pub factorial_factor: bool,
}

impl DenominatorSpec {
    /// `alpha = -A/8 - r^2/2`, `beta = (r-1)/2 - A + 1`, `gamma = -1/(2A) + A - 2`.
    pub fn for_params(p: &FormParams, reduced: bool) -> Self {
        let FormParams { a, r, .. } = *p;
        let alpha = rat(-a, 8) - rat(r * r, 2);
        let beta_prime = rat(r - 1, 2);
        let gamma_prime = rat(-1, 2 * a);
        DenominatorSpec {
            beta: &beta_prime - rat(a - 1, 1),
            gamma: &gamma_prime + rat(a - 2, 1),
            alpha,
            beta_prime,
            gamma_prime,
            d_power: if reduced { a - 1 } else { a },
            factorial_factor: true,
        }
    }

    pub fn q_exponent(&self, n: i64) -> i64 {
        let n = BigRat::from_integer(n.into());
        let v = &self.alpha * &n * &n + &self.beta * &n + &self.gamma;
        let f: BigInt = v.numer().div_floor(v.denom());
        i64::try_from(f).expect("exponent fits")
    }

    /// `[(A-1)!] q^{floor(..)} d_n(1/q)^power` in factored form.
    pub fn factor(&self, a: i64, n: i64, power: i64, with_factorial: bool) -> CycloFrac {
        let mut v = CycloFrac::q_pow(self.q_exponent(n));
        if n >= 1 {
            let d = d_n_factored(n as usize).invert_variable();
            v = v.times(&d.pow(power).expect("nonzero"));
        }
        if with_factorial {
            let f: BigInt = (1..a).map(BigInt::from).product();
            v = v.scaled(&BigRat::from_integer(f));
        }
        v
    }
}

/// `D_n(q)` (or the reduced `D~_n(q)` with one power of `d_n(1/q)` fewer).
pub fn build_d(p: &FormParams, reduced: bool) -> (DenominatorSpec, RatFunc) {
    let spec = DenominatorSpec::for_params(p, reduced);
    let v = spec.factor(p.a, p.n, spec.d_power, spec.factorial_factor).to_ratfunc();
    (spec, v)
}

/// One membership claim of a verification sweep.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MembershipRecord {
    pub claim: String,
    #[serde(rename = "A")]
    pub a: i64,
    pub r: i64,
    pub n: i64,
    pub index: i64,
    pub pass: bool,
    /// sha256 of the witness polynomial, when the value is a Laurent polynomial.
    pub digest: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DenominatorReport {
    pub records: Vec<MembershipRecord>,
}

impl DenominatorReport {
    pub fn pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }
}

pub fn digest(l: &LaurentPoly) -> String {
    let h = Sha256::digest(l.to_string().as_bytes());
    h.iter().map(|b| format!("{b:02x}")).collect()
}

/// Membership of a value in `Z[1/q]`, with the witness digest.
pub fn in_z_inv_q(v: &CycloFrac) -> (bool, Option<String>) {
    match v.to_laurent() {
        Some(l) => (l.max_exp().is_none_or(|e| e <= 0), Some(digest(&l))),
        None => (false, None),
    }
}

/// Checks `q^e d_n(1/q)^{d_power} P_0 in Z[1/q]` (with and without `(A-1)!`)
/// and `(A-1)! q^e d_n(1/q)^{d_power + 1 - j} P_j in Z[1/q]` for odd `j`.
pub fn verify_denominator_theorem(b: &FormBuild, spec: &DenominatorSpec) -> DenominatorReport {
    let FormParams { a, r, n } = b.form.params;
    let mut records = Vec::new();
    let mut push = |claim: &str, index: i64, v: &CycloFrac| {
        let (pass, digest) = in_z_inv_q(v);
        records.push(MembershipRecord {
            claim: claim.to_string(),
            a,
            r,
            n,
            index,
            pass,
            digest,
        });
    };
    let bare = spec.factor(a, n, spec.d_power, false);
    push("p_hat_0", 0, &bare.times(&b.p_hat_0));
    let full = spec.factor(a, n, spec.d_power, spec.factorial_factor);
    push("p_hat_0_factorial", 0, &full.times(&b.p_hat_0));
    for (&j, v) in &b.p_hat_odd {
        let f = spec.factor(a, n, spec.d_power + 1 - j, spec.factorial_factor);
        push("p_hat_odd", j, &f.times(v));
    }
    DenominatorReport { records }
}

/// The unweighted bound: `q^e d_n(1/q)^{A-s} c[s][j] in Z[1/q]` for all entries.
pub fn coefficient_bound_holds(b: &FormBuild) -> bool {
    let FormParams { a, n, .. } = b.form.params;
    let spec = DenominatorSpec::for_params(&b.form.params, false);
    let ne = BigRat::from_integer(n.into());
    let v = &spec.alpha * &ne * &ne + &spec.beta_prime * &ne + &spec.gamma_prime;
    let e = i64::try_from(v.numer().div_floor(v.denom())).unwrap();
    (1..=a).all(|s| {
        (0..=n).all(|j| {
            let mut f = CycloFrac::q_pow(e);
            if n >= 1 {
                f = f.times(&d_n_factored(n as usize).invert_variable().pow(a - s).unwrap());
            }
            in_z_inv_q(&f.times(b.table.c(s, j))).0
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear_forms::build_linear_form_detailed;

    #[test]
    fn exponent_example() {
        let p = FormParams::new(4, 1, 2).unwrap();
        let spec = DenominatorSpec::for_params(&p, true);
        assert_eq!(spec.beta, rat(-3, 1));
        assert_eq!(spec.gamma, rat(15, 8));
        // -4 - 6 + 15/8
        assert_eq!(spec.q_exponent(2), -9);
    }

    #[test]
    fn ratio_is_d_n() {
        let p = FormParams::new(6, 2, 3).unwrap();
        let (_, full) = build_d(&p, false);
        let (_, reduced) = build_d(&p, true);
        let d = crate::qtoolkit::d_n_factored(3).invert_variable().to_ratfunc();
        assert_eq!(&full / &reduced, d);
    }

    #[test]
    fn small_sweep() {
        for (a, r, n) in [(4, 1, 1), (4, 1, 2), (6, 1, 1)] {
            let p = FormParams::new(a, r, n).unwrap();
            let b = build_linear_form_detailed(&p).unwrap();
            let rep = verify_denominator_theorem(&b, &DenominatorSpec::for_params(&p, true));
            assert!(rep.pass(), "{rep:?}");
            assert!(coefficient_bound_holds(&b));
        }
    }
}
