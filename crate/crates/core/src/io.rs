//! Parsers for command-line values and decoders for the JSON file formats.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_algebra::{BigRat, LaurentPoly, RatFunc};
use crate::linear_forms::{FormParams, LinearForm, LinearFormJson, LINEAR_FORM_SCHEMA};

/// Largest accepted exponent magnitude in decoded polynomials.
pub const MAX_EXPONENT: i64 = 1 << 20;
/// Largest accepted number of values in a parsed range.
pub const MAX_RANGE_LEN: usize = 10_000;
const MAX_DIGITS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid rational `{0}`")]
    Rational(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("invalid range `{0}`")]
    Range(String),
    #[error("range `{0}` is empty")]
    EmptyRange(String),
    #[error("range `{0}` has more than {MAX_RANGE_LEN} values")]
    RangeTooLong(String),
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("invalid exponent `{0}`")]
    Exponent(String),
    #[error("invalid coefficient `{0}`")]
    Coefficient(String),
    #[error("zero denominator polynomial")]
    ZeroPolynomialDenominator,
    #[error("unsupported schema `{0}`")]
    Schema(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("unexpected coefficient index {0}")]
    Index(String),
}

fn parse_int(s: &str) -> Option<BigInt> {
    let t = s.strip_prefix(['+', '-']).unwrap_or(s);
    if t.is_empty() || t.len() > MAX_DIGITS || !t.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Parses `p/q`, `1/m` or an integer into an exact rational.
pub fn parse_qpoint(s: &str) -> Result<BigRat, ParseError> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let n = parse_int(num).ok_or_else(|| ParseError::Rational(s.to_string()))?;
    let d = parse_int(den).ok_or_else(|| ParseError::Rational(s.to_string()))?;
    if d.is_zero() {
        return Err(ParseError::ZeroDenominator(s.to_string()));
    }
    Ok(BigRat::new(n, d))
}

fn parse_small(s: &str, whole: &str) -> Result<i64, ParseError> {
    let t = s.trim();
    let body = t.strip_prefix('-').unwrap_or(t);
    if body.is_empty() || body.len() > 18 || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::Range(whole.to_string()));
    }
    t.parse().map_err(|_| ParseError::Range(whole.to_string()))
}

/// Parses comma-separated integers and inclusive spans `a..b` (or `a..=b`).
/// The result is sorted and free of duplicates.
pub fn parse_range(s: &str) -> Result<Vec<i64>, ParseError> {
    let mut out = BTreeSet::new();
    for item in s.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(ParseError::Range(s.to_string()));
        }
        if let Some((a, b)) = item.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let lo = parse_small(a, s)?;
            let hi = parse_small(b, s)?;
            if hi < lo {
                return Err(ParseError::EmptyRange(s.to_string()));
            }
            if (hi - lo) as u64 >= MAX_RANGE_LEN as u64 {
                return Err(ParseError::RangeTooLong(s.to_string()));
            }
            out.extend(lo..=hi);
        } else {
            out.insert(parse_small(item, s)?);
        }
        if out.len() > MAX_RANGE_LEN {
            return Err(ParseError::RangeTooLong(s.to_string()));
        }
    }
    Ok(out.into_iter().collect())
}

/// Rational function as two integer coefficient maps (exponent to decimal string).
/// Exponents may be negative.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RatFuncJson {
    pub num: BTreeMap<String, String>,
    pub den: BTreeMap<String, String>,
}

fn laurent_to_map(l: &LaurentPoly) -> BTreeMap<String, String> {
    l.terms().iter().map(|(e, c)| (e.to_string(), c.to_string())).collect()
}

fn map_to_laurent(m: &BTreeMap<String, String>) -> Result<LaurentPoly, ParseError> {
    let mut terms = Vec::with_capacity(m.len());
    for (e, c) in m {
        let exp = parse_small(e, e).map_err(|_| ParseError::Exponent(e.clone()))?;
        if exp.abs() > MAX_EXPONENT {
            return Err(ParseError::Exponent(e.clone()));
        }
        let coef = parse_int(c).ok_or_else(|| ParseError::Coefficient(c.clone()))?;
        terms.push((exp, coef));
    }
    Ok(LaurentPoly::from_terms(terms))
}

impl RatFuncJson {
    pub fn from_ratfunc(f: &RatFunc) -> Self {
        let (num, den) = f.to_integer_parts();
        RatFuncJson {
            num: laurent_to_map(&LaurentPoly::from_poly_shifted(&num, 0)),
            den: laurent_to_map(&LaurentPoly::from_poly_shifted(&den, 0)),
        }
    }

    pub fn to_ratfunc(&self) -> Result<RatFunc, ParseError> {
        let num = map_to_laurent(&self.num)?;
        let den = map_to_laurent(&self.den)?;
        if den.is_zero() {
            return Err(ParseError::ZeroPolynomialDenominator);
        }
        let (np, ns) = num.to_poly_shifted();
        let (dp, ds) = den.to_poly_shifted();
        let base = RatFunc::from_parts(np, dp);
        Ok(&base * &RatFunc::q_pow(ns - ds))
    }
}

/// Decodes a [`RatFuncJson`] document.
pub fn decode_ratfunc(text: &str) -> Result<RatFunc, ParseError> {
    let j: RatFuncJson = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    j.to_ratfunc()
}

/// Decodes a linear-form document and checks its parameters and index set.
pub fn decode_linear_form(text: &str) -> Result<LinearForm, ParseError> {
    let j: LinearFormJson = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    if j.schema != LINEAR_FORM_SCHEMA {
        return Err(ParseError::Schema(j.schema));
    }
    let params = FormParams::new(j.a, j.r, j.n).map_err(|e| ParseError::Params(e.to_string()))?;
    if params.a > 1000 {
        return Err(ParseError::Params(format!("A = {} is too large", params.a)));
    }
    let expected: BTreeSet<String> = params.odd_indices().iter().map(|j| j.to_string()).collect();
    let got: BTreeSet<String> = j.p_hat.keys().cloned().collect();
    if let Some(bad) = got.symmetric_difference(&expected).next() {
        return Err(ParseError::Index(bad.clone()));
    }
    let mut p_hat_odd = BTreeMap::new();
    for (k, v) in &j.p_hat {
        p_hat_odd.insert(k.parse::<i64>().unwrap(), v.to_ratfunc()?);
    }
    Ok(LinearForm {
        params,
        p_hat_0: j.p_hat_0.to_ratfunc()?,
        p_hat_odd,
    })
}

/// Fixed-format decimal rendering used in reports.
pub fn fmt_sci(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.is_finite() {
        format!("{x:.12e}")
    } else {
        format!("{x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat;

    #[test]
    fn qpoints() {
        assert_eq!(parse_qpoint("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_qpoint(" -1/2 ").unwrap(), rat(-1, 2));
        assert_eq!(parse_qpoint("3").unwrap(), rat(3, 1));
        assert_eq!(parse_qpoint("2/4").unwrap(), rat(1, 2));
        assert!(matches!(parse_qpoint("1/0"), Err(ParseError::ZeroDenominator(_))));
        for bad in ["", "/", "1/", "a/2", "1/2/3", "1.5", "--1"] {
            assert!(parse_qpoint(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3").unwrap(), vec![3]);
        assert_eq!(parse_range("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_range("1..=2,5,2").unwrap(), vec![1, 2, 5]);
        assert_eq!(parse_range("-1..1").unwrap(), vec![-1, 0, 1]);
        assert!(parse_range("4..1").is_err());
        assert!(parse_range("").is_err());
        assert!(parse_range("1,,2").is_err());
        assert!(parse_range("0..100000").is_err());
    }

    #[test]
    fn ratfunc_roundtrip() {
        let f = RatFunc::from_parts(
            crate::exact_algebra::IntPoly::from_i64(&[0, 3, -2]),
            crate::exact_algebra::IntPoly::from_i64(&[1, 0, 5]),
        );
        let text = serde_json::to_string(&RatFuncJson::from_ratfunc(&f)).unwrap();
        assert_eq!(decode_ratfunc(&text).unwrap(), f);
        assert!(decode_ratfunc(r#"{"num":{"0":"1"},"den":{}}"#).is_err());
        assert!(decode_ratfunc(r#"{"num":{"x":"1"},"den":{"0":"1"}}"#).is_err());
        let neg = decode_ratfunc(r#"{"num":{"-2":"3"},"den":{"0":"1"}}"#).unwrap();
        assert_eq!(neg, RatFunc::q_pow(-2).scale_by(&rat(3, 1)));
    }
}
