// `!(x > tol)` is used on purpose so that NaN counts as a failure; tensor
// loops read better with explicit indices.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::redundant_guards, clippy::too_many_arguments)]

pub mod curve;
pub mod ellipse;
pub mod error;
pub mod expr;
pub mod numerics;
pub mod output;
pub mod plane;
pub mod reconstruct;
pub mod runner;
pub mod space;
pub mod suite;
pub mod surface;
pub mod vec;

pub use error::{Error, Result};
