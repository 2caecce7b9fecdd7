//! Label-efficient multiclass learning when classes are carved out by linear
//! output codes: geometric primitives, certified problem generators, cluster
//! based and plane-detection learners, an experiment harness and Monte Carlo
//! reference oracles.

pub mod clustering;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod learners;
pub mod oracles;
pub mod problems;
pub mod rng;

pub use error::{Error, Result};
