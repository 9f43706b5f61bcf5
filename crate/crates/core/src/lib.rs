//! Beamforming optimization for MIMO wireless power transfer with nonlinear
//! rectennas.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod cli;
pub mod config;
pub mod convex;
pub mod dc_combining;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod rectenna;
pub mod rf_combining;
pub mod rng;
pub mod scaling;

pub use error::{Result, WptError};
pub use linalg::{ComplexMatrix, C64};
