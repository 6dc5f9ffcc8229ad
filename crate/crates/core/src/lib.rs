//! Simulation core for extreme quantum cognition machines.
//!
//! The pipeline maps a symbolic string to a dichotomic vector ([`encoding`]),
//! prepares the maximum-entropy product state compatible with it, evolves it
//! under a fixed reservoir Hamiltonian plus an input-dependent attention term
//! ([`quantum`]), reads out Pauli expectation values ([`features`]) and feeds
//! them to a ridge-regression readout ([`readout`]) whose sign gives the
//! decision. [`metrics`] scores the decisions and [`corpus`] assembles the
//! labelled word datasets.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the experiment
//! runner and the command line live in the companion `eqcm` crate.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod corpus;
pub mod encoding;
pub mod error;
pub mod features;
pub mod metrics;
pub mod quantum;
pub mod readout;

pub use error::{Error, Result};
