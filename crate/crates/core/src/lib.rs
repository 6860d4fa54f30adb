//! Capacity limits and receiver models for coherent-state optical channels.
//!
//! `capacity_limits` holds the closed forms. The physically constructed
//! channels in `optics_sim` and the Gram-matrix measurements in
//! `discrimination` are the independent models they are checked against.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ber_sim;
pub mod capacity_limits;
pub mod codes;
pub mod discrimination;
pub mod entropy;
mod error;
#[cfg(test)]
mod invariants;
pub mod link_budget;
pub mod optics_sim;
pub mod quadrature;
pub mod superchannel;

pub use error::{Error, Result};
