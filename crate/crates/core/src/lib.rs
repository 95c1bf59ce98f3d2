//! Fairness-aware power allocation for a multi-antenna wireless power
//! transmitter charging mobile sensors through orthogonal bands.
//!
//! The crate provides the rectifier models ([`ehmodel`]), the beamformed
//! channel ([`channel`]), band selection ([`selection`]), the per-round power
//! allocators ([`allocation`]), sensor mobility ([`mobility`]), a seeded
//! Monte-Carlo engine ([`simulator`]) and brute-force reference solvers used
//! to certify the allocators ([`oracle`]).

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod allocation;
pub mod channel;
pub mod ehmodel;
pub mod error;
pub mod mobility;
pub mod oracle;
pub mod rng;
pub mod selection;
pub mod simulator;

pub use allocation::{
    AllocationProblem, AllocationResult, AllocationStatus, CrpmOptions, LcrpmMode, LinearProblem,
    LinearSensorRecord, SensorRecord,
};
pub use ehmodel::{LinearEhParams, LogEhParams, RectifierSample};
pub use error::{Error, Result};
pub use simulator::{
    metrics, run, Allocator, EhModel, Scheme, Selector, SimConfig, SimTrace, Simulation, Summary,
};
