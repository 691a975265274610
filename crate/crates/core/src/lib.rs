//! Simulation of ultrasonic microphone jammers.
//!
//! The crate computes the narrowband field of transducer arrays, passes
//! AM-noise jamming through a nonlinear microphone model, moves wearable
//! jammers along gesture trajectories, and scores the result with blind
//! spot detection and a threshold word-error model.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capture;
pub mod error;
pub mod field;
pub mod geometry;
pub mod metrics;
pub mod motion;
mod par;
pub mod presets;
pub mod rng;
pub mod runner;
pub mod scenario;
pub mod setups;
pub mod signal;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
