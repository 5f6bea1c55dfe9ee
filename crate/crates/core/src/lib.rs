//! Mahler measures of sparse integer polynomials.
//!
//! The crate covers exact sparse arithmetic ([`poly`]), univariate and
//! multivariate measure evaluation ([`measure`], [`multivar`]), cyclotomic
//! detection ([`cyclotomic`]), the height inequalities for k-nomials
//! ([`bounds`]) and resumable exhaustive searches ([`census`]). The
//! `sparse-mahler` binary is a thin wrapper over [`cli`].

pub mod bounds;
pub mod census;
pub mod cli;
pub mod cyclotomic;
pub mod error;
mod json;
pub mod measure;
pub mod multivar;
pub mod poly;

pub use error::{Error, Result};
