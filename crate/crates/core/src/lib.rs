//! Ergodic sums of step functions over irrational rotations.
//!
//! The crate computes continued-fraction data of a rotation number α,
//! Ostrowski expansions, exact profiles and variances of Birkhoff sums
//! `φ_n(x) = Σ_{j<n} φ(x + jα)`, distances of their normalized laws to the
//! Gaussian, and the symbolic dynamics attached to quadratic α.

// `!(x > 0.0)` is the deliberate NaN-rejecting form
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cf;
pub mod cli;
pub mod clt;
pub mod error;
pub mod ostrowski;
pub mod phase;
pub mod piecewise;
pub mod sft;
pub mod stepfn;
pub mod sums;

pub use error::{Error, Result};
