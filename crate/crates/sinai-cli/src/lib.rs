//! Experiment harness, file formats, and CLI plumbing on top of
//! [`sinai_core`].
//!
//! Everything here is deliberately deterministic: reports are pure functions
//! of their configuration, replications derive their seeds hierarchically
//! from the master seed, and parallel execution aggregates an order-stable
//! vector, so serial and parallel runs produce byte-identical files.

pub mod calibration;
pub mod config;
pub mod experiments;
pub mod formats;

pub use config::{EnvConfig, ExperimentConfig, ExperimentKind};
pub use experiments::{run_experiment, ExperimentOutput};
