//! Derivative-free global optimization with particle swarms.
//!
//! Three update rules are provided: the baseline swarm update, the
//! comprehensive-learning variant that steers every particle toward a
//! per-dimension exemplar assembled from neighbor personal bests, and an
//! event-triggered accelerated variant that zeroes the guidance coefficient
//! for any dimension already within a threshold of its exemplar, skipping the
//! two multiplications of the guidance term. The [`harness`] module runs
//! seeded multi-run batteries over the standard benchmark functions and
//! accounts executed multiplications so the cost/accuracy trade-off of the
//! triggered variant can be measured.

pub mod aclpso;
pub mod clpso;
pub mod error;
pub mod harness;
pub mod objectives;
pub mod rng;
pub mod swarm;

pub use error::{Error, Result};
