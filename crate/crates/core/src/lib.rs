//! Finite-difference schemes for size-structured coagulation-fragmentation
//! models posed on nonnegative Radon measures.

pub mod discretize;
pub mod harness;
pub mod error;
pub mod measures;
pub mod problem;
pub mod quadrature;
pub mod stepper;

pub use error::{Error, Result};
