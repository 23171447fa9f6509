//! Integer-valued step functions of one time-like coordinate: the
//! number-of-ancestors paths.
//!
//! Paths are stored over the backward depth coordinate `r`: the value at
//! depth `r` is the number of ancestors `r` time units before the
//! observation time. Backward ancestor-count paths are nonincreasing in
//! `r`; by the time-reversal property the same object also represents the
//! forward residual-lifetime count, which the `direction` tag records.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathDirection {
    /// `M_{-r}`: ancestors of the present population, indexed by depth.
    BackwardAncestors,
    /// `M_s^{s+r}`: survivors of the present population, indexed by residual time.
    ForwardResidual,
}

/// Piecewise-constant path on `[lo, hi]` with value `initial` before the
/// first jump and the stored value from each jump coordinate on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepPath {
    direction: PathDirection,
    lo: f64,
    hi: f64,
    initial: u64,
    jumps: Vec<(f64, u64)>,
}

impl StepPath {
    pub fn new(direction: PathDirection, lo: f64, hi: f64, initial: u64) -> Self {
        assert!(lo < hi, "empty path domain [{lo}, {hi}]");
        Self { direction, lo, hi, initial, jumps: Vec::new() }
    }

    /// Append a jump; coordinates must arrive in increasing order inside the domain.
    pub fn push_jump(&mut self, at: f64, value: u64) {
        let last = self.jumps.last().map_or(self.lo, |j| j.0);
        assert!(at >= last && at <= self.hi, "jump at {at} out of order or domain");
        self.jumps.push((at, value));
    }

    pub fn direction(&self) -> PathDirection {
        self.direction
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn initial(&self) -> u64 {
        self.initial
    }

    pub fn jumps(&self) -> &[(f64, u64)] {
        &self.jumps
    }

    /// Path value at coordinate `r` (must lie in the domain).
    pub fn value_at(&self, r: f64) -> u64 {
        assert!(
            r >= self.lo && r <= self.hi,
            "query {r} outside path domain [{}, {}]",
            self.lo,
            self.hi
        );
        match self.jumps.partition_point(|&(t, _)| t <= r) {
            0 => self.initial,
            k => self.jumps[k - 1].1,
        }
    }

    /// Integral of the path over `[a, b]` within the domain.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        assert!(a >= self.lo && b <= self.hi && a <= b, "bad integration range [{a}, {b}]");
        let mut total = 0.0;
        let mut t = a;
        let mut value = self.value_at(a);
        for &(jt, jv) in &self.jumps {
            if jt <= a {
                continue;
            }
            if jt >= b {
                break;
            }
            total += value as f64 * (jt - t);
            t = jt;
            value = jv;
        }
        total + value as f64 * (b - t)
    }

    /// True when consecutive values move by exactly one in the given direction.
    pub fn has_unit_steps(&self, increasing: bool) -> bool {
        let mut prev = self.initial;
        for &(_, v) in &self.jumps {
            let ok = if increasing { v == prev + 1 } else { prev == v + 1 };
            if !ok {
                return false;
            }
            prev = v;
        }
        true
    }
}
