//! Rigorous ball evaluation of q-series, linear-form residuals and growth rates.

mod interval;
mod series;
mod slopes;

use thiserror::Error;

use crate::linear_forms::FormError;

pub use interval::{ln_abs, pi, sci_string, IntervalValue};
pub use series::{
    bernoulli, bernoulli_numbers, check_inside, check_off_circle, eisenstein, eval_s_tilde, first_term_sandwich,
    linear_form_residual, s_tilde_functional_residual, s_tilde_ratio, s_tilde_term, z_s, z_s_identity_check,
    z_s_reciprocal, zeta_q, zeta_q_divisor_sum,
};
pub use slopes::{slope_estimate, slope_target, SlopeEntry, SlopeQuantity};

pub const DEFAULT_PRECISION: u32 = 256;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("invalid q: {0}")]
    QPoint(String),
    #[error("division by a ball containing zero")]
    DivisionByZero,
    #[error("{0}")]
    Domain(String),
    #[error("series did not reach the requested tolerance")]
    NoConvergence,
    #[error("rational function has a pole at q")]
    Pole,
    #[error(transparent)]
    Form(#[from] FormError),
}
