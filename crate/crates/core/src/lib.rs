//! Design and dispatch of multi-carrier renewable microgrids as a two-stage stochastic
//! MILP.
//!
//! The crate is organised bottom-up:
//!
//! * [`catalog`] holds candidate equipment and the bundled default dataset,
//! * [`scenarios`] turns weather, demand and policy trajectories into a weighted
//!   scenario set,
//! * [`model`] compiles both into the deterministic-equivalent MILP,
//! * [`solve`] writes MPS, drives external solvers and ships an exact branch-and-bound
//!   for small instances,
//! * [`analysis`] reads designs, dispatch, emissions and costs back out of solutions
//!   and runs the value-of-stochastic-solution procedure.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod catalog;
pub mod error;
pub mod model;
pub mod scenarios;
pub mod solve;
pub mod study;

pub use error::{Error, Result};
