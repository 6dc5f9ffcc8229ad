//! Experiment runner for extreme quantum cognition machines.
//!
//! Loads word lists, expands task presets into an [`ExperimentConfig`], runs
//! the encode/evolve/read-out pipeline from `eqcm-core` and writes every
//! table needed to redraw the weight, histogram and confusion-matrix panels
//! as plain CSV and JSON.

pub mod artifacts;
pub mod config;
pub mod error;
pub mod evaluate;
pub mod pipeline;
pub mod sweep;
pub mod wordlist;

pub use config::{ExperimentConfig, Task};
pub use error::{RunError, RunResult};
pub use pipeline::{run_experiment, RunReport};

pub use eqcm_core as core;
