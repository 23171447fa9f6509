//! Ancestor-count paths simulated from their generator descriptions.
//!
//! Two independent constructions of the same law as the lineage-tree
//! counting path: backward in calendar time the count is a pure birth
//! process with rate `beta c(|t|) (M + 2)`; forward in depth it is a pure
//! death process with per-individual rate `beta (2 theta + c(r))`. Both are
//! simulated by exact inversion of the integrated rate, whose closed form
//! comes from the band integral of `c` — no thinning, no tuning.
//!
//! Paths are stored over the depth coordinate `r = |t|`.

use crate::kernel;
use crate::lineage::sample_z0;
use crate::params::{DomainError, ModelParams};
use crate::step_path::{PathDirection, StepPath};
use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson};

/// How to seed the count at the far end of the simulation window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Initializer {
    /// Exact stationary marginal: Poisson(`c(T) Z`) with `Z` a stationary mass draw.
    Marginal,
    /// Fixed count, used to test that the process forgets its start.
    FixedCount(u64),
}

/// Window and initialization for the birth-process simulation on
/// `[-horizon, -eps_stop]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSimConfig {
    pub horizon: f64,
    pub eps_stop: f64,
    pub initializer: Initializer,
}

impl PathSimConfig {
    pub fn new(horizon: f64, eps_stop: f64, initializer: Initializer) -> Result<Self, DomainError> {
        if !(eps_stop > 0.0) {
            return Err(DomainError::new(
                "PathSimConfig",
                eps_stop,
                "eps_stop must be > 0 (birth rates diverge at the observation time)",
            ));
        }
        if !(horizon > eps_stop) {
            return Err(DomainError::new("PathSimConfig", horizon, "need horizon > eps_stop"));
        }
        Ok(Self { horizon, eps_stop, initializer })
    }
}

/// Simulate the backward count as a pure birth process from depth `horizon`
/// down to `eps_stop`. Given count `m` at depth `r0`, the next birth depth
/// solves `(m + 2) beta ∫_r^{r0} c = E` for a standard exponential `E`,
/// giving `1 - e^{-a r} = (1 - e^{-a r0}) e^{-E/(m+2)}` in closed form.
pub fn simulate_birth_path<R: Rng + ?Sized>(
    p: &ModelParams,
    rng: &mut R,
    config: &PathSimConfig,
) -> Result<StepPath, DomainError> {
    let a = p.decay_rate();
    let count = match config.initializer {
        Initializer::Marginal => {
            let z = sample_z0(p, rng);
            let mean = z * kernel::extinction_rate(p, config.horizon)?;
            if mean > 0.0 {
                Poisson::new(mean).expect("positive mean").sample(rng) as u64
            } else {
                0
            }
        }
        Initializer::FixedCount(m) => m,
    };

    let mut births: Vec<f64> = Vec::new(); // depths, generated in decreasing order
    let mut r = config.horizon;
    loop {
        let m = (count + births.len() as u64) as f64;
        let e: f64 = Exp1.sample(rng);
        let one_minus = -(-a * r).exp_m1(); // 1 - e^{-a r0}
        let survivor = one_minus * (-e / (m + 2.0)).exp();
        let next = -(-survivor).ln_1p() / a;
        if next <= config.eps_stop {
            break;
        }
        births.push(next);
        r = next;
    }
    // over the depth coordinate the count decreases from the final value at
    // eps_stop back down to the initial value at the horizon
    let final_count = count + births.len() as u64;
    let mut path = StepPath::new(
        PathDirection::BackwardAncestors,
        config.eps_stop,
        config.horizon,
        final_count,
    );
    let mut value = final_count;
    for &depth in births.iter().rev() {
        value -= 1;
        path.push_jump(depth, value);
    }
    Ok(path)
}

/// Simulate the count as a pure death process from depth `eps_start` out to
/// `horizon`, started from the exact marginal Poisson(`c(eps_start) Z`).
/// With `m` individuals at depth `r0` and `x0 = e^{-a r0}`, the next death
/// depth solves `m [2 beta theta (r - r0) + beta ∫_{r0}^r c] = E`, i.e.
/// `e^{-a r} = x0 / (x0 + (1 - x0) e^{E/m})`.
pub fn simulate_death_path<R: Rng + ?Sized>(
    p: &ModelParams,
    rng: &mut R,
    eps_start: f64,
    horizon: f64,
) -> Result<StepPath, DomainError> {
    if !(eps_start > 0.0) {
        return Err(DomainError::new("simulate_death_path", eps_start, "eps_start must be > 0"));
    }
    if !(horizon > eps_start) {
        return Err(DomainError::new("simulate_death_path", horizon, "need horizon > eps_start"));
    }
    let a = p.decay_rate();
    let z = sample_z0(p, rng);
    let mean = z * kernel::extinction_rate(p, eps_start)?;
    let mut count: u64 =
        if mean > 0.0 { Poisson::new(mean).expect("positive mean").sample(rng) as u64 } else { 0 };

    let mut path = StepPath::new(PathDirection::BackwardAncestors, eps_start, horizon, count);
    let mut r = eps_start;
    while count > 0 {
        let e: f64 = Exp1.sample(rng);
        let x0 = (-a * r).exp();
        let next = ((x0 + (1.0 - x0) * (e / count as f64).exp()).ln() + a * r) / a;
        if next >= horizon {
            break;
        }
        count -= 1;
        path.push_jump(next, count);
        r = next;
    }
    Ok(path)
}
