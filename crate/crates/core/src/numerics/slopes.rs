//! Growth rates `(1/n²) log|value|` along `n`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact_algebra::BigRat;
use crate::linear_forms::{build_linear_form, FormParams};
use crate::qtoolkit::d_n;

use super::interval::ln_abs;
use super::series::{check_off_circle, eval_s_tilde};
use super::NumericsError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeQuantity {
    STilde,
    DN,
    PHatMax,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeEntry {
    pub n: i64,
    pub slope: Option<f64>,
    pub target: f64,
    pub relative_gap: Option<f64>,
}

/// Limiting slope predicted for each quantity, in units of `log|1/q|`.
pub fn slope_target(quantity: SlopeQuantity, a: i64, r: i64, q: &BigRat) -> f64 {
    let l = -ln_abs(q);
    match quantity {
        SlopeQuantity::STilde => -0.5 * (r * (a - 2 * r)) as f64 * l,
        SlopeQuantity::DN => 3.0 / (std::f64::consts::PI * std::f64::consts::PI) * l,
        SlopeQuantity::PHatMax => (a + 4 * r * r) as f64 / 8.0 * l,
    }
}

fn log_value(quantity: SlopeQuantity, a: i64, r: i64, q: &BigRat, n: i64) -> Result<Option<f64>, NumericsError> {
    match quantity {
        SlopeQuantity::STilde => {
            let p = FormParams::new(a, r, n)?;
            let v = eval_s_tilde(&p, q, 96)?;
            Ok((!v.contains_zero()).then(|| ln_abs(v.mid())))
        }
        SlopeQuantity::DN => {
            let poly = d_n(n).map_err(|e| NumericsError::Domain(e.to_string()))?;
            let v = poly.eval(&q.recip());
            Ok((!num_traits::Zero::is_zero(&v)).then(|| ln_abs(&v)))
        }
        SlopeQuantity::PHatMax => {
            let form = build_linear_form(&FormParams::new(a, r, n)?)?;
            let mut best: Option<f64> = None;
            for f in std::iter::once(&form.p_hat_0).chain(form.p_hat_odd.values()) {
                let v = f.eval(q).ok_or(NumericsError::Pole)?;
                if !num_traits::Zero::is_zero(&v) {
                    let l = ln_abs(&v);
                    best = Some(best.map_or(l, |b: f64| b.max(l)));
                }
            }
            Ok(best)
        }
    }
}

/// `(1/n²) log|value_n|` for each `n` in `n_range`; entries with a zero value
/// (or `n = 0`) carry no slope.
pub fn slope_estimate(
    quantity: SlopeQuantity,
    a: i64,
    r: i64,
    q: &BigRat,
    n_range: &[i64],
) -> Result<Vec<SlopeEntry>, NumericsError> {
    check_off_circle(q)?;
    if n_range.windows(2).any(|w| w[0] >= w[1]) {
        return Err(NumericsError::Domain("n_range must be increasing".into()));
    }
    let target = slope_target(quantity, a, r, q);
    n_range
        .par_iter()
        .map(|&n| {
            let lv = if n == 0 { None } else { log_value(quantity, a, r, q, n)? };
            let slope = lv.map(|l| l / (n * n) as f64);
            let relative_gap = slope.map(|s| (s - target).abs() / target.abs());
            Ok(SlopeEntry {
                n,
                slope,
                target,
                relative_gap,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat;

    #[test]
    fn d_n_slope_trend() {
        let rows = slope_estimate(SlopeQuantity::DN, 4, 1, &rat(1, 2), &[10, 30, 50]).unwrap();
        let g: Vec<f64> = rows.iter().map(|e| e.relative_gap.unwrap()).collect();
        assert!(g[2] < 0.2, "{g:?}");
    }
}
