//! Preparation, simulation, tomography and correlation analysis of
//! Bell-diagonal and Werner two-qubit states.

pub mod bds;
pub mod circuits;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod simulator;
pub mod sweep;
pub mod tomography;

pub use error::{Error, Result};
