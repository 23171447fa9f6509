//! Model parameters and the domain-error type shared by all closed forms.

use serde::{Deserialize, Serialize};

/// The two positive scale parameters of the model: `beta` sets the branching
/// time-scale (units 1/time) and `theta` the inverse mean population size.
/// Every rate in the model is a function of these two numbers; the derived
/// relaxation rate `2*beta*theta` shows up often enough to deserve its own
/// accessor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    beta: f64,
    theta: f64,
}

impl ModelParams {
    pub fn new(beta: f64, theta: f64) -> Result<Self, DomainError> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(DomainError::new("ModelParams::beta", beta, "must be finite and > 0"));
        }
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(DomainError::new("ModelParams::theta", theta, "must be finite and > 0"));
        }
        Ok(Self { beta, theta })
    }

    /// Unit parameters, the default in every check suite.
    pub fn unit() -> Self {
        Self { beta: 1.0, theta: 1.0 }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The exponential relaxation rate `2*beta*theta` of the population.
    pub fn decay_rate(&self) -> f64 {
        2.0 * self.beta * self.theta
    }
}

/// A documented precondition of a closed-form quantity was violated.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{quantity}: argument {argument} rejected: {reason}")]
pub struct DomainError {
    pub quantity: &'static str,
    pub argument: f64,
    pub reason: &'static str,
}

impl DomainError {
    pub fn new(quantity: &'static str, argument: f64, reason: &'static str) -> Self {
        Self { quantity, argument, reason }
    }
}
