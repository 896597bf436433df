//! One function per subcommand; each returns a report and never prints.

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use qzeta::criterion::{self, CriterionError};
use qzeta::denominator::{
    andrews_applied_sum, andrews_sweep, blocks_sweep, closed_form_check, coefficient_bound_holds, direct_applied_sum,
    extended_params, random_instance, sufficient_condition_holds, verify_denominator_theorem, watson_sides,
    ClosedFormCase, DenomError, DenominatorSpec, EjTable,
};
use qzeta::exact_algebra::BigRat;
use qzeta::io::{fmt_sci, ParseError};
use qzeta::linear_forms::{
    build_linear_form, build_linear_form_detailed, coefficient_symmetry_holds, functional_equation_holds,
    reconstruction_holds, residue_sum, FormError, FormParams, LinearForm,
};
use qzeta::numerics::{linear_form_residual, slope_estimate, zeta_q, IntervalValue, NumericsError, SlopeQuantity};

use crate::report::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Denominator(#[from] DenomError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Criterion(#[from] CriterionError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn radius_log2(v: &IntervalValue) -> String {
    let l = v.rad_log2();
    if l.is_finite() {
        format!("{l:.1}")
    } else {
        "-inf".to_string()
    }
}

/// The linear-form document for `(A, r, n)`.
pub fn form_build(a: i64, r: i64, n: i64) -> Result<String, CliError> {
    let form = build_linear_form(&FormParams::new(a, r, n)?)?;
    let mut s = serde_json::to_string_pretty(&form.to_json()).expect("form serializes");
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct ResidualRecord {
    #[serde(rename = "A")]
    a: i64,
    r: i64,
    n: i64,
    q: String,
    precision: u32,
    residual: IntervalValue,
    radius_log2: String,
}

/// Residual enclosures over `ns × qs`, or for the single supplied form.
pub fn form_verify(
    a: i64,
    r: i64,
    ns: &[i64],
    qs: &[BigRat],
    precision: u32,
    input: Option<&LinearForm>,
) -> Result<Report, CliError> {
    let mut rep = Report::new(
        "form verify",
        json!({"A": a, "r": r, "n": ns, "q": qs.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
               "precision": precision, "input": input.is_some()}),
    );
    let forms: Vec<LinearForm> = match input {
        Some(f) => vec![f.clone()],
        None => ns
            .iter()
            .map(|&n| Ok(build_linear_form(&FormParams::new(a, r, n)?)?))
            .collect::<Result<_, CliError>>()?,
    };
    for f in &forms {
        for q in qs {
            let res = linear_form_residual(f, q, precision)?;
            let pass = res.contains_zero();
            rep.push(
                &ResidualRecord {
                    a: f.params.a,
                    r: f.params.r,
                    n: f.params.n,
                    q: q.to_string(),
                    precision,
                    radius_log2: radius_log2(&res),
                    residual: res,
                },
                pass,
            );
        }
    }
    Ok(rep)
}

#[derive(Serialize)]
struct StructureRecord {
    claim: &'static str,
    #[serde(rename = "A")]
    a: i64,
    r: i64,
    n: i64,
    s: Option<i64>,
}

/// Exact structural identities of the coefficient table for `(A, r, n)`.
pub fn structure_verify(a: i64, r: i64, ns: &[i64]) -> Result<Report, CliError> {
    let mut rep = Report::new("form structure", json!({"A": a, "r": r, "n": ns}));
    for &n in ns {
        let p = FormParams::new(a, r, n)?;
        let b = build_linear_form_detailed(&p)?;
        let t = &b.table;
        let rec = |claim, s| StructureRecord { claim, a, r, n, s };
        rep.push(&rec("reconstruction", None), reconstruction_holds(t));
        rep.push(&rec("residue_sum", None), residue_sum(t).is_zero());
        rep.push(&rec("coefficient_symmetry", None), coefficient_symmetry_holds(t));
        for s in 1..=a {
            rep.push(&rec("functional_equation", Some(s)), functional_equation_holds(t, s));
        }
        if n >= 1 {
            let e = EjTable::new(&p, (a - 1) as usize)?;
            let want = b.parts.p0_q.plus(&b.parts.p0_inverse_term).negated();
            rep.push(&rec("e_j_assembly", None), qzeta::denominator::v_k_assembly(&e) == want);
        }
    }
    Ok(rep)
}

#[derive(Serialize)]
struct SufficientRecord {
    claim: &'static str,
    #[serde(rename = "A")]
    a: i64,
    r: i64,
    n: i64,
    l: usize,
    k: i64,
}

/// Denominator memberships for `(A, r, n)`, optionally with the sufficient
/// condition over `A ∈ {0, 2, 4}`, `r ∈ {0, 1}`, `l ≤ 2`.
pub fn denom_verify(a: i64, r: i64, ns: &[i64], reduced: bool, sufficient: bool) -> Result<Report, CliError> {
    let mut rep = Report::new(
        "denom verify",
        json!({"A": a, "r": r, "n": ns, "reduced": reduced, "sufficient": sufficient}),
    );
    for &n in ns {
        let p = FormParams::new(a, r, n)?;
        let b = build_linear_form_detailed(&p)?;
        let spec = DenominatorSpec::for_params(&p, reduced);
        for m in verify_denominator_theorem(&b, &spec).records {
            let pass = m.pass;
            rep.push(&m, pass);
        }
        rep.push(
            &json!({"claim": "coefficient_bound", "A": a, "r": r, "n": n}),
            coefficient_bound_holds(&b),
        );
    }
    if sufficient {
        let n_max = ns.iter().copied().max().unwrap_or(0);
        for sa in [0, 2, 4] {
            for sr in [0, 1] {
                for n in 1..=n_max {
                    let p = extended_params(sa, sr, n)?;
                    let e = EjTable::new(&p, 2)?;
                    for l in 0..=2 {
                        for k in 1..=n {
                            let rec = SufficientRecord {
                                claim: "sufficient_condition",
                                a: sa,
                                r: sr,
                                n,
                                l,
                                k,
                            };
                            rep.push(&rec, sufficient_condition_holds(&e, l, k));
                        }
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Closed forms for `n ≤ n_max`, the seeded transformation sweep with its
/// Watson cross-checks, and the applied sum for `A = 4`, `n ≤ applied_n_max`.
pub fn identity_verify(n_max: i64, seed: u64, count: usize, applied_n_max: i64) -> Result<Report, CliError> {
    let mut rep = Report::new(
        "identity verify",
        json!({"n_max": n_max, "seed": seed, "count": count, "applied_n_max": applied_n_max}),
    );
    for case in ClosedFormCase::ALL {
        for n in 1..=n_max {
            for k in 1..=n {
                let c = closed_form_check(case, n, k);
                let pass = c.pass();
                rep.push(&json!({"claim": "closed_form", "detail": c}), pass);
            }
        }
    }
    for rec in andrews_sweep(seed, count) {
        let equal = rec.equal;
        let watson = if rec.m == 1 {
            let (inst, _) = random_instance(seed, rec.index);
            let (b, c) = (&inst.b, &inst.c);
            let out = qzeta::denominator::andrews_transform(&inst)?;
            match watson_sides(&inst.base, &inst.a, [&b[0], &c[0], &b[1], &c[1]], inst.n) {
                Ok((l, r)) => Some(l == out.lhs && r == out.rhs),
                Err(DenomError::Degenerate) => None,
                Err(e) => return Err(e.into()),
            }
        } else {
            None
        };
        let pass = equal && watson != Some(false);
        rep.push(&json!({"claim": "andrews", "detail": rec, "watson": watson}), pass);
    }
    for n in 2..=applied_n_max {
        let p = FormParams::new(4, 1, n)?;
        for k in 1..=n {
            let same = andrews_applied_sum(&p, k, 1)?.same(&direct_applied_sum(&p, k, 1)?);
            rep.push(
                &json!({"claim": "andrews_applied", "A": 4, "r": 1, "n": n, "k": k}),
                same,
            );
        }
    }
    Ok(rep)
}

pub fn blocks_verify(n_max: i64, r_max: i64, l_max: usize, exponents: &[i64]) -> Result<Report, CliError> {
    let mut rep = Report::new(
        "blocks verify",
        json!({"n_max": n_max, "r_max": r_max, "l_max": l_max, "e": exponents}),
    );
    for rec in blocks_sweep(n_max, r_max, l_max, exponents) {
        let pass = rec.member && rec.valuation_agrees != Some(false);
        rep.push(&rec, pass);
    }
    Ok(rep)
}

pub fn criterion_check() -> Result<Report, CliError> {
    let mut rep = Report::new("criterion check", json!({}));
    let suite = criterion::inequality_suite()?;
    for c in &suite.checks {
        rep.push(c, c.certified);
    }
    let tg = criterion::threshold(criterion::Bound::G, 200)?;
    let tf = criterion::threshold(criterion::Bound::F, 200)?;
    rep.push(
        &json!({"statement": "smallest A with g(A) > 1", "value": tg}),
        tg == Some(10),
    );
    rep.push(
        &json!({"statement": "smallest A with f(A) > 1", "value": tf}),
        tf == Some(12),
    );
    Ok(rep)
}

pub fn criterion_table(a_values: &[i64]) -> Result<Report, CliError> {
    let mut rep = Report::new("criterion table", json!({"A": a_values}));
    if let Some(bad) = a_values.iter().find(|a| **a < 4 || **a % 2 != 0) {
        return Err(CliError::Usage(format!("A = {bad} must be even and at least 4")));
    }
    for row in criterion::table(a_values)? {
        rep.push(&row, true);
    }
    Ok(rep)
}

#[derive(Serialize)]
struct SlopeRecord {
    n: i64,
    slope: Option<String>,
    target: String,
    relative_gap: Option<String>,
}

/// Slope table; with `tolerance`, each defined slope must satisfy the check
/// (two-sided gap for `s_tilde`/`d_n`, one-sided `slope ≤ (1+tol)·target` for `p_hat_max`).
pub fn asymptotics_sweep(
    quantity: SlopeQuantity,
    a: i64,
    r: i64,
    q: &BigRat,
    ns: &[i64],
    tolerance: Option<f64>,
) -> Result<Report, CliError> {
    let mut rep = Report::new(
        "asymptotics sweep",
        json!({"quantity": quantity, "A": a, "r": r, "q": q.to_string(), "n": ns, "tolerance": tolerance}),
    );
    for e in slope_estimate(quantity, a, r, q, ns)? {
        let pass = match (tolerance, e.slope, e.relative_gap) {
            (Some(t), Some(s), Some(g)) => match quantity {
                SlopeQuantity::PHatMax => s <= (1.0 + t) * e.target,
                _ => g <= t,
            },
            _ => true,
        };
        let rec = SlopeRecord {
            n: e.n,
            slope: e.slope.map(fmt_sci),
            target: fmt_sci(e.target),
            relative_gap: e.relative_gap.map(fmt_sci),
        };
        rep.push(&rec, pass);
    }
    Ok(rep)
}

pub fn zeta_eval(s: i64, q: &BigRat, precision: u32) -> Result<Report, CliError> {
    let mut rep = Report::new("zeta eval", json!({"s": s, "q": q.to_string(), "precision": precision}));
    let v = zeta_q(s, q, precision)?;
    rep.push(
        &json!({"s": s, "q": q.to_string(), "value": v, "radius_log2": radius_log2(&v)}),
        true,
    );
    Ok(rep)
}
