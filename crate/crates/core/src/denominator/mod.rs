//! Common denominators of the linear-form coefficients and the identities
//! used to control them.

mod andrews;
mod blocks;
mod closed_forms;
mod ej;
mod spec;

use thiserror::Error;

use crate::exact_algebra::AlgebraError;
use crate::linear_forms::FormError;

pub use andrews::*;
pub use blocks::*;
pub use closed_forms::*;
pub use ej::*;
pub use spec::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DenomError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate parameterization")]
    Degenerate,
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
