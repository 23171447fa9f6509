//! Genealogy toolkit for a stationary quadratic continuous-state branching
//! population.
//!
//! The model is a sub-critical quadratic CB process kept stationary by
//! immigration along an immortal line; it is parameterized by a branching
//! time-scale `beta` and an inverse mean population size `theta`. The crate
//! provides:
//!
//! * [`kernel`] — closed-form evaluation of every law of the model
//!   (extinction rates, ancestor-count transforms, tree-length moments,
//!   the dilogarithm and the tree-length Laplace exponent `phi`);
//! * [`lineage`] — exact sampling of the stationary population size and of
//!   the truncated lineage tree, plus all its deterministic functionals;
//! * [`paths`] — event-driven simulation of the ancestor-count path by its
//!   birth- and death-process generator descriptions;
//! * [`particle`] — a binary-branching particle system with immigration
//!   approximating the population together with its full genealogy;
//! * [`verify`] — Monte Carlo estimators, z-tests, Kolmogorov–Smirnov
//!   tests and the named check suites built from them.
//!
//! All samplers draw from explicit [`rng::RandomStream`]s, so every result
//! is reproducible given `(seed, stream_index)` and replication can be
//! parallelized across stream indices without affecting the output.

pub mod kernel;
pub mod lineage;
pub mod params;
pub mod particle;
pub mod paths;
pub mod rng;
pub mod step_path;
pub mod verify;

pub use params::{DomainError, ModelParams};
pub use rng::RandomStream;
pub use step_path::{PathDirection, StepPath};
