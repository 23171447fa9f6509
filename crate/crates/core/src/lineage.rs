//! Exact samplers for the stationary population and its lineage tree.
//!
//! The lineage tree of the population alive at a fixed time is, in law, the
//! set of lifetimes of a Poisson point measure with intensity
//! `dx |c'(z)| dz` below the population mass. Truncating at `eps` keeps a
//! Poisson(`z0 c(eps)`) number of lifetimes, each drawn exactly by
//! inverting the conditional tail `c(t)/c(eps)` through the closed-form
//! inverse of `c` — no rejection, no discretization. Every genealogical
//! functional used by the checks (ancestor counts, TMRCA, truncated and
//! compensated tree lengths, the limit-length estimate) is a deterministic
//! function of one such sample.

use crate::kernel;
use crate::params::{DomainError, ModelParams};
use crate::step_path::{PathDirection, StepPath};
use rand::Rng;
use rand_distr::{Binomial, Distribution, Exp1, Open01, Poisson};

/// One draw of the stationary mass together with its `eps`-truncated
/// lineage tree, lifetimes sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct LineageSample {
    z0: f64,
    epsilon: f64,
    lifetimes: Vec<f64>,
}

impl LineageSample {
    /// Assemble a sample from parts, enforcing the truncation invariant.
    pub fn new(z0: f64, epsilon: f64, mut lifetimes: Vec<f64>) -> Result<Self, DomainError> {
        if !(epsilon > 0.0) {
            return Err(DomainError::new("LineageSample", epsilon, "epsilon must be > 0"));
        }
        if !(z0 >= 0.0) {
            return Err(DomainError::new("LineageSample", z0, "z0 must be >= 0"));
        }
        if lifetimes.iter().any(|&l| !(l > epsilon)) {
            return Err(DomainError::new(
                "LineageSample",
                epsilon,
                "every lifetime must strictly exceed epsilon",
            ));
        }
        lifetimes.sort_unstable_by(|a, b| b.partial_cmp(a).expect("lifetimes are finite"));
        Ok(Self { z0, epsilon, lifetimes })
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Lifetimes in descending order, all `> epsilon`.
    pub fn lifetimes(&self) -> &[f64] {
        &self.lifetimes
    }

    pub fn len(&self) -> usize {
        self.lifetimes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lifetimes.is_empty()
    }

    /// Number of lifetimes strictly exceeding `r`.
    pub fn count_exceeding(&self, r: f64) -> u64 {
        self.lifetimes.partition_point(|&l| l > r) as u64
    }

    /// Time to the most recent common ancestor; an empty tree can only be
    /// located below the truncation, reported as `epsilon`.
    pub fn tmrca(&self) -> f64 {
        self.lifetimes.first().copied().unwrap_or(self.epsilon)
    }
}

/// Draw the stationary population mass: the sum of two independent
/// exponentials with mean `1/(2 theta)`.
pub fn sample_z0<R: Rng + ?Sized>(p: &ModelParams, rng: &mut R) -> f64 {
    let e1: f64 = Exp1.sample(rng);
    let e2: f64 = Exp1.sample(rng);
    (e1 + e2) / (2.0 * p.theta())
}

fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let draw: f64 = Poisson::new(mean).expect("positive finite mean").sample(rng);
    draw as u64
}

/// One lifetime conditioned to exceed `eps`: inverse-transform through
/// `c^{-1}(u c(eps))`, exact for `u` uniform on (0,1).
fn draw_lifetime<R: Rng + ?Sized>(p: &ModelParams, c_eps: f64, eps: f64, rng: &mut R) -> f64 {
    let u: f64 = Open01.sample(rng);
    let lt = kernel::extinction_rate_inverse(p, u * c_eps).expect("positive argument");
    if lt > eps {
        lt
    } else {
        eps.next_up() // inverse rounded onto the boundary
    }
}

/// Draw the `eps`-truncated lineage tree of one stationary population.
pub fn sample_lineage<R: Rng + ?Sized>(
    p: &ModelParams,
    rng: &mut R,
    epsilon: f64,
) -> Result<LineageSample, DomainError> {
    if !(epsilon > 0.0) {
        return Err(DomainError::new("sample_lineage", epsilon, "epsilon must be > 0"));
    }
    let z0 = sample_z0(p, rng);
    let c_eps = kernel::extinction_rate(p, epsilon)?;
    let count = poisson_count(z0 * c_eps, rng);
    let mut lifetimes = Vec::with_capacity(count as usize);
    for _ in 0..count {
        lifetimes.push(draw_lifetime(p, c_eps, epsilon, rng));
    }
    lifetimes.sort_unstable_by(|a, b| b.partial_cmp(a).expect("finite"));
    Ok(LineageSample { z0, epsilon, lifetimes })
}

/// The backward ancestor-count path of a lineage sample: the value at depth
/// `r` is the number of lifetimes exceeding `r`, valid for `r >= epsilon`.
/// By time reversal the same path is distributed as the forward
/// residual-lifetime count.
pub fn ancestor_path(sample: &LineageSample) -> StepPath {
    let mut path = StepPath::new(
        PathDirection::BackwardAncestors,
        sample.epsilon,
        f64::INFINITY,
        sample.len() as u64,
    );
    for (k, &lt) in sample.lifetimes.iter().rev().enumerate() {
        path.push_jump(lt, (sample.len() - 1 - k) as u64);
    }
    path
}

/// Truncated tree length `sum (lifetime - at)_+`; `at` may not resolve
/// below the sample's truncation.
pub fn tree_length(sample: &LineageSample, at: f64) -> Result<f64, DomainError> {
    if at < sample.epsilon {
        return Err(DomainError::new(
            "tree_length",
            at,
            "cannot resolve branches below the sample truncation",
        ));
    }
    let mut total = 0.0;
    for &lt in &sample.lifetimes {
        if lt <= at {
            break; // sorted descending
        }
        total += lt - at;
    }
    Ok(total)
}

/// Compensated tree length
/// `L(at) - z0 ∫_at^∞ c = L(at) + (z0/beta) log(1 - e^{-2 beta theta at})`.
pub fn compensated_length(p: &ModelParams, sample: &LineageSample, at: f64) -> Result<f64, DomainError> {
    Ok(tree_length(sample, at)? - sample.z0 * kernel::tail_rate_integral(p, at)?)
}

/// Estimate of the limit compensated length from a truncated sample; its
/// L2 error is bounded by `truncation_error_second_moment(epsilon)`.
pub fn w0_estimate(p: &ModelParams, sample: &LineageSample) -> f64 {
    compensated_length(p, sample, sample.epsilon).expect("at = epsilon is always resolvable")
}

/// A forward ancestor-count chain: the population mass and the counts
/// `M_0^{t_1}, ..., M_0^{t_k}` at the requested levels.
#[derive(Debug, Clone, PartialEq)]
pub struct ThinningChain {
    pub z0: f64,
    pub counts: Vec<u64>,
}

/// Exact draw of the forward counts at ascending levels: Poisson at the
/// first level, then binomial thinning with ratio `c(t_{i+1})/c(t_i)`.
pub fn forward_thinning_chain<R: Rng + ?Sized>(
    p: &ModelParams,
    rng: &mut R,
    levels: &[f64],
) -> Result<ThinningChain, DomainError> {
    if levels.is_empty() {
        return Err(DomainError::new("forward_thinning_chain", 0.0, "need at least one level"));
    }
    if !(levels[0] > 0.0) || levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DomainError::new(
            "forward_thinning_chain",
            levels[0],
            "levels must be positive and strictly ascending",
        ));
    }
    let z0 = sample_z0(p, rng);
    let mut counts = Vec::with_capacity(levels.len());
    let mut c_prev = kernel::extinction_rate(p, levels[0])?;
    let mut current = poisson_count(z0 * c_prev, rng);
    counts.push(current);
    for &level in &levels[1..] {
        let c_here = kernel::extinction_rate(p, level)?;
        if current > 0 {
            current = Binomial::new(current, c_here / c_prev)
                .expect("thinning ratio in (0,1)")
                .sample(rng);
        }
        counts.push(current);
        c_prev = c_here;
    }
    Ok(ThinningChain { z0, counts })
}

/// One excursion conditioned to survive to depth `v`, reduced to its slice
/// counts: the surviving mass at `v` (an exponential with mean
/// `(1 - e^{-2 beta theta v})/(2 theta)`, obtained by inverting the
/// conditional transform `(c(v) - u(lambda, v))/c(v)`), then the counts of
/// descendants reaching `v + q_i` by Poisson mixing and binomial thinning.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceSample {
    pub mass_at_v: f64,
    pub counts: Vec<u64>,
}

pub fn excursion_slice_sample<R: Rng + ?Sized>(
    p: &ModelParams,
    rng: &mut R,
    v: f64,
    horizons: &[f64],
) -> Result<SliceSample, DomainError> {
    if !(v > 0.0) {
        return Err(DomainError::new("excursion_slice_sample", v, "v must be > 0"));
    }
    if horizons.is_empty() || !(horizons[0] > 0.0) || horizons.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DomainError::new(
            "excursion_slice_sample",
            v,
            "horizons must be nonempty, positive, strictly ascending",
        ));
    }
    let mean = -(-p.decay_rate() * v).exp_m1() / (2.0 * p.theta());
    let e: f64 = Exp1.sample(rng);
    let mass = mean * e;
    let mut counts = Vec::with_capacity(horizons.len());
    let mut c_prev = kernel::extinction_rate(p, horizons[0])?;
    let mut current = poisson_count(mass * c_prev, rng);
    counts.push(current);
    for &q in &horizons[1..] {
        let c_here = kernel::extinction_rate(p, q)?;
        if current > 0 {
            current = Binomial::new(current, c_here / c_prev)
                .expect("thinning ratio in (0,1)")
                .sample(rng);
        }
        counts.push(current);
        c_prev = c_here;
    }
    Ok(SliceSample { mass_at_v: mass, counts })
}

/// One draw of the rescaled truncation fluctuation
/// `sqrt(beta/eps) (L~_eps - L~_eps_ref)`, a proxy for
/// `sqrt(beta/eps) (L~_eps - W)` whose bias is controlled by
/// `truncation_error_second_moment(eps_ref)`. In the limit the law is
/// `sqrt(2 Z) G` with `G` standard normal independent of `Z`.
pub fn fluctuation_pair<R: Rng + ?Sized>(
    p: &ModelParams,
    rng: &mut R,
    eps: f64,
    eps_ref: f64,
) -> Result<f64, DomainError> {
    if !(eps > 0.0) {
        return Err(DomainError::new("fluctuation_pair", eps, "eps must be > 0"));
    }
    if !(eps_ref > 0.0 && eps_ref <= eps) {
        return Err(DomainError::new("fluctuation_pair", eps_ref, "need 0 < eps_ref <= eps"));
    }
    let z0 = sample_z0(p, rng);
    let c_ref = kernel::extinction_rate(p, eps_ref)?;
    let count = poisson_count(z0 * c_ref, rng);
    let mut sum_eps = 0.0;
    let mut sum_ref = 0.0;
    for _ in 0..count {
        let lt = draw_lifetime(p, c_ref, eps_ref, rng);
        if lt > eps {
            sum_eps += lt - eps;
        }
        sum_ref += lt - eps_ref;
    }
    let comp_eps = sum_eps - z0 * kernel::tail_rate_integral(p, eps)?;
    let comp_ref = sum_ref - z0 * kernel::tail_rate_integral(p, eps_ref)?;
    Ok((p.beta() / eps).sqrt() * (comp_eps - comp_ref))
}
