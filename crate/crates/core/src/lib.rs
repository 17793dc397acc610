//! Thermal Casimir and Casimir-Polder interactions from the Lifshitz theory.

// `!(x > 0.0)` is used throughout so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod lifshitz;
pub mod materials;
pub mod optics;
pub mod quadrature;
pub mod reflection;
pub mod special;
pub mod units;

pub use error::{CasimirError, Result};
