//! Exact-arithmetic engine for a weight-truncated free-boson vertex algebra:
//! multivariate rational correlators, the ε-product of W-valued rational
//! functions, coboundary operators of the associated double complex, and the
//! product-type cohomology classes built from them.
//!
//! Everything is computed over ℚ. Correlators are reconstructed as canonical
//! rational functions (no floating point, no series approximations on the
//! evaluation path), so each identity of the theory becomes a machine-checkable
//! equality of normal forms.

pub mod ratfunc;
pub mod voa;
pub mod wspace;
pub mod eprod;
pub mod complex;
pub mod report;
pub mod suites;

mod error;

pub use error::{Error, Result};
