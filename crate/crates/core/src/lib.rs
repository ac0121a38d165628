//! Random polymer Jacobi operators near a hyperbolic critical energy.
//!
//! The crate samples i.i.d. polymer configurations, builds their transfer
//! matrices, follows Prüfer phases and Dyson–Schmidt variables, counts
//! eigenvalues of finite truncations and estimates the integrated density of
//! states together with its Hölder exponent at the critical energy.

// `!(x <= bound)` is used on purpose so that NaN counts as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod error;
pub mod exec;
pub mod mat2;
pub mod model;
pub mod quadrature;
pub mod pruefer;
pub mod spectral;
pub mod transfer;

pub use error::{Error, Result};
pub use mat2::Mat2;
