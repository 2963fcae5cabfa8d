//! Numerical construction of steady gradient Ricci solitons and pointwise
//! verification of the identities they satisfy.

// `!(x > 0.0)` rejects NaN along with nonpositive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bryant;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod identity;
pub mod io;
pub mod model;
pub mod numerics;
pub mod probe;

pub use error::{Error, Result};
