//! Horizon-aware state-vector simulation of the four-qubit black hole
//! evaporation circuit.
//!
//! The crate covers five concerns:
//!
//! - [`statevec`]: dense pure states and exact application of one-qubit
//!   unitaries, CNOT and SWAP;
//! - [`entropy`]: partial trace, Jacobi eigenvalues and the von Neumann
//!   entanglement entropy;
//! - [`horizon`]: inside/outside region tracking, the causality rules as a
//!   gate-admissibility checker, and the timeline runner producing entropy
//!   traces;
//! - [`model`]: the canonical evaporation circuit, its closed-form
//!   entropy plateaus and stage checkpoints, and the jittered many-block
//!   Page-curve generator;
//! - [`dsl`] / [`report`]: the circuit description language and CSV output.
//!
//! Information may cross the horizon inward only: a cross-horizon CNOT needs
//! an outer control, a cross-horizon SWAP is forbidden, and crossings are
//! one-way. Everything else is ordinary unitary circuit evolution.

pub mod dsl;
pub mod entropy;
mod error;
pub mod horizon;
pub mod model;
pub mod report;
pub mod statevec;

pub use error::{Error, Result};
pub use num_complex::Complex64;
