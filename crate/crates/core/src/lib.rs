//! Gaussian-state toolkit for quantum reading: covariance-matrix states,
//! distinguishability measures, discord of response and a truncated Fock
//! oracle for cross-checks.

pub mod discord;
pub mod distinguishability;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod gaussian;
pub mod optimize;

pub use error::{Error, Result};
