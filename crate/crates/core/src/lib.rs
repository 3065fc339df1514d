//! Simulation and verification toolkit for symmetric random walks on
//! iterated wreath products `Z^2 wr (Z^2 wr ( ... wr F))`.
//!
//! * [`group`]: exact element arithmetic, decorated generators, breadth-first
//!   word-metric balls and word-length brackets.
//! * [`lattice`]: simple random walks on `Z^2`, local times, range and
//!   Monte Carlo estimates of local-time functionals.
//! * [`iterlog`]: iterated-logarithm functions on extended-range reals and
//!   numerical concavity checks.
//! * [`estimators`]: exact convolution powers, entropy, drift brackets and
//!   asymptotic rate fitting.
//! * [`cli`]: the experiment runner behind the `wreathwalk` binary.

pub mod cli;
pub mod error;
pub mod estimators;
pub mod group;
pub mod iterlog;
pub mod lattice;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
