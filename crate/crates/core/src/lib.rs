//! Simulation and analysis toolkit for three-party secure direct communication
//! over shared GHZ triplets and entanglement swapping.
//!
//! The crate is layered bottom-up:
//!
//! - [`quantum`]: exact state vectors for up to eight qubits, Bell and GHZ bases,
//!   local Pauli operators, Bell-basis measurement and three-qubit density matrices.
//! - [`swap`]: closed-form entanglement-swapping tables for pairs of GHZ states and
//!   the decode map Charlie uses to recover the senders' operators.
//! - [`protocol`]: party state machines for direct message transmission, the key
//!   distribution variant and the key-generation sub-protocol, all logged to a
//!   public [`protocol::Transcript`].
//! - [`security`]: GHZ-basis twirling, stabilizer error rates, hashing yields and
//!   the distill/discard verdict.
//! - [`adversary`]: eavesdropper models and Monte Carlo harnesses.

pub mod adversary;
pub mod bits;
mod error;
pub mod protocol;
pub mod quantum;
pub mod rng;
pub mod security;
pub mod swap;

pub use error::{Error, Result};

/// Absolute tolerance used for exact-math comparisons throughout the crate.
pub const EPS: f64 = 1e-12;
