//! Deterministic round-based simulator for cluster-routed wireless sensor
//! networks.
//!
//! Four election protocols (LEACH, TEEN, SEP, DEEC) run over a first-order
//! radio energy model, optionally under a threshold-based sleep/awake
//! overlay that benches energy-poor nodes for a round at a time. Runs are
//! reproducible bit for bit from a seed; the [`harness`] module loads
//! configs, drives multi-seed experiments, and writes per-round CSV.

pub mod config;
pub mod ehorm;
pub mod engine;
pub mod error;
pub mod harness;
pub mod network;
pub mod protocols;
pub mod radio;
pub mod rng;

pub use config::SimConfig;
pub use engine::{run, SimulationResult};
pub use error::{Error, Result};
