//! Simulation and analysis of entanglement-assisted classical communication
//! through a depolarizing qubit channel.
//!
//! The crate is layered bottom-up:
//!
//! - [`quantum`]: exact two-qubit density matrices, Pauli operators, Bell
//!   states, one-sided Pauli application and Bell-basis measurement.
//! - [`channels`]: the depolarizing channel, visibility-degraded (Werner)
//!   inputs, the liquid-crystal timing model and the global noise law.
//! - [`information`]: closed-form entanglement-assisted capacity and
//!   classical mutual information of a Bell-alphabet channel.
//! - [`experiment`]: Monte Carlo coincidence counting, plug-in estimation
//!   and Poisson error propagation, parameter sweeps.

pub mod channels;
mod error;
pub mod experiment;
pub mod information;
pub mod quantum;

pub use error::{Error, Result};

use serde::{Deserialize, Serialize};
use std::fmt;

/// A probability checked to lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);

    pub fn new(value: f64) -> Result<Self> {
        check_unit_interval("probability", value).map(Probability)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Probability::new(value)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub(crate) fn check_unit_interval(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::OutOfRange { name, value })
    }
}
