//! Lower bounds on the guaranteed privacy of finite-dimensional quantum
//! channels, and randomized verification of the entropy inequalities they
//! rest on.
//!
//! All entropies are in bits. All randomness is seeded.

#![forbid(unsafe_code)]
// `!(x >= 0.0)` style guards are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod checks;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod privacy;
pub mod qchannel;
pub mod qstate;
pub mod rng;

pub use error::{Error, Result};
