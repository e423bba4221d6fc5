//! Certified upper bounds for the exponent of large gaps between primes,
//! computed from piecewise zero-density bounds, plus numerical experiments
//! on primes in short intervals.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod empirical;
pub mod cli;
pub mod error;
pub mod exact;
pub mod piecewise;
pub mod mu;
pub mod tables;
pub mod verify;

pub use error::{Error, Result};
