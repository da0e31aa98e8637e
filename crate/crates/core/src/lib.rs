//! Canonical (action-angle) wave-packet dynamics for Gaussian and
//! three-photon-extended trial states, with an exact Fock-basis reference for
//! the quartic oscillator.

pub mod dynamics;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod fock;
pub mod hamiltonian;
pub mod observables;
pub mod trial;

pub use error::{Error, Result};
