//! Generate random binary CSPs, solve them to measure hardness, and mine
//! association rules over the recorded instance characteristics to find the
//! parameter regions where hard instances live.
//!
//! The stages compose as a pipeline (see [`pipeline`]):
//! generate → solve → classify → select → discretize → mine → deduce → report.

// `!(x > 0.0)` is used on purpose to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bitset;
pub mod dataset;
pub mod deduce;
pub mod error;
pub mod generator;
pub mod miner;
pub mod model;
pub mod numfmt;
pub mod par;
pub mod pipeline;
pub mod rng;
pub mod solver;

pub use error::{Error, Result};
