// `!(x <= y)` is how NaN residuals are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod douglas;
pub mod error;
pub mod frame;
pub mod genlab;
pub mod jensen;
pub mod numkit;
pub mod theorems;

pub use error::{Error, Result};

/// Default relative tolerance for identities and inequalities.
pub const DEFAULT_TOL: f64 = 1e-9;
