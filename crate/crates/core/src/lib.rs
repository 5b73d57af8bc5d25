// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod integrate;
pub mod lp;
pub mod mhd;
pub mod scenarios;

pub use error::{Error, Result};
