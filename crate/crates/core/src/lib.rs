//! Paired frequentist and Bayesian linear regression of net loan loss.
//!
//! The pipeline reads a quarterly CSV, applies the time encodings and scale
//! transforms ([`data`]), summarizes and runs one-way ANOVA ([`describe`]),
//! fits OLS with QR-based inference and diagnostics ([`ols`]), samples the
//! conjugate Normal–Inverse-Gamma posterior and measures posterior mass inside
//! the region of practical equivalence ([`bayes`]), and combines both into a
//! per-regressor verdict ([`verdict`]).

// `!(x > 0.0)` is used on purpose so NaN inputs fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bayes;
pub mod cli;
pub mod data;
pub mod describe;
pub mod error;
pub mod kernels;
pub mod linalg;
pub mod ols;
pub mod pipeline;
pub mod report;
pub mod verdict;

pub use error::{Error, Result};
