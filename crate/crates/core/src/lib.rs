//! Quantum dynamical activity of Lindblad dynamics.

pub mod activity;
pub mod asymptotics;
pub mod error;
pub mod liouville;
pub mod metrology;
pub mod model;
pub mod numerics;
pub mod trajectories;

pub use error::{Error, Result};
