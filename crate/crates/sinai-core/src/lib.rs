//! Core algorithms for one-dimensional random walks in random environment.
//!
//! The crate is organized around a single pipeline:
//!
//! 1. [`mod@env`] samples an i.i.d. transition-probability field over a
//!    lattice window and derives the associated random potential.
//! 2. [`walk`] simulates the quenched chain, keeping a bit-packed step stream
//!    and a local-time ledger.
//! 3. [`landscape`] analyses the potential: valleys, depth, refinement, and
//!    the minimal valley around the origin that traps the walk.
//! 4. [`estimator`] reconstructs the potential profile from a single
//!    trajectory via the logarithm of the local time.
//! 5. [`bd`] provides exact birth–death excursion analytics used as oracles
//!    and diagnostics for everything above.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats, and the CLI
//! live in the companion `sinai-cli` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bd;
pub mod env;
pub mod error;
pub mod estimator;
pub mod landscape;
pub mod scale;
pub mod seed;
pub mod walk;

pub use env::{EnvFamily, Environment, EnvironmentSpec, HypothesisDiagnostics, PotentialPath};
pub use error::CoreError;
pub use estimator::{
    EstimateRow, EstimateTable, LocalizationReport, ReconstructionReport, TargetProfile,
    WellVisited,
};
pub use landscape::{BasicValley, GoodEnvReport, Refinement, ValleyOutcome, ValleyTriple};
pub use walk::{FavoriteSites, LocalTimeLedger, StepStream, WalkRun};

/// Lattice coordinate.
pub type Site = i64;

/// Discrete time index; the walk is observed at times `1..=n`.
pub type Time = u64;
