//! Problem-size-independent optimization of Grover-driver QAOA schedules.
//!
//! The ensemble expectation of the depth-p Grover-driver QAOA energy is a
//! closed-form functional of the cost distribution's characteristic
//! function, so optimal angle schedules can be computed once per ensemble
//! instead of once per instance. This crate implements that calculus
//! ([`ensemble`]) over analytic and empirical characteristic functions
//! ([`charfn`]), an exact statevector oracle to validate it against
//! ([`simulator`]), instance generators for two standard ensembles
//! ([`problems`]), a multistart quasi-Newton optimizer ([`optimize`]), and
//! the figure-level studies built on top ([`experiments`]).

pub mod charfn;
pub mod cli;
pub mod ensemble;
pub mod error;
pub mod experiments;
pub mod optimize;
pub mod problems;
pub mod simulator;

pub use charfn::{CharacteristicFunction, Spectrum, MAX_QUBITS};
pub use ensemble::{b_factor, e1, e2, ep, ep_full, AngleSchedule, DEFAULT_MAX_DEPTH};
pub use error::{Error, Result};
pub use experiments::{
    convergence_study, depth_sweep, landscape_scan, GridAxis, ProblemKind,
};
pub use optimize::{minimize_ep, OptimizationConfig, OptimizationResult};

#[cfg(doctest)]
mod book;
