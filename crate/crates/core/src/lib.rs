//! Relative-entropy toolkit for classical and quantum information.

pub mod classical;
pub mod constants;
pub mod entanglement;
pub mod error;
pub mod io;
pub mod matcore;
pub mod qalgo;
pub mod qchannel;
pub mod protocols;
pub mod qentropy;
pub mod qstate;
pub mod random;
pub mod selftest;
pub mod units;

pub use error::{Error, Result};
pub use units::Units;
