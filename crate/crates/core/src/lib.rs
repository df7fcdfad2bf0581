//! Finite-set model of a locally cartesian closed category, used to check
//! that fibrations defined by a generic point are stable under pushforward.

pub mod cli;
pub mod error;
pub mod kernel;
pub mod fibrations;
pub mod frobenius;
pub mod interval;
pub mod mates;
pub mod oracle;
pub mod slices;
pub mod structured;

pub use error::{Error, Result};
