//! Exact sparse polynomials: one-variable integer polynomials, multivariate
//! Laurent polynomials, and the substitutions between them.

pub mod dense;
mod laurent;
mod parse;
mod univariate;

pub use laurent::{ExponentMatrix, ExponentVector, MultiLaurentPoly};
pub use parse::{parse_multivariate, parse_poly, parse_univariate, ParseMode, ParsedPoly};
pub use univariate::{ScaledPoly, UnivariateIntPoly, MAX_EXPONENT};

pub(crate) use univariate::{mul_mod, unit_phase};
