//! Event-driven binary-branching particle system with immigration along an
//! immortal line, approximating the stationary population together with its
//! full multi-time genealogy.
//!
//! Each particle carries mass `1/n`; particles split at rate `beta n`, die
//! at rate `beta n + 2 beta theta`, and immigrants arrive from the immortal
//! line at rate `2 beta n`. This is the standard quadratic scaling: the
//! rescaled count has stationary mean `1/theta` exactly, and its genealogy
//! converges to the model's. One aggregate exponential clock drives the
//! simulation, so each event costs O(1) regardless of the population size.
//!
//! Backward queries (ancestor counts at a depth, truncated tree lengths)
//! walk parent pointers from the living population upward; the chains
//! coalesce quickly, so the walk touches only the reduced lineage forest.
//! Long runs periodically rewrite the particle table down to exactly that
//! forest, which bounds memory without touching the law of anything a
//! backward query can see.

use crate::kernel;
use crate::params::{DomainError, ModelParams};
use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

/// Parent marker for particles immigrating off the immortal line.
pub const IMMORTAL_PARENT: i64 = -1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleRecord {
    /// Index of the parent particle, or [`IMMORTAL_PARENT`].
    pub parent: i64,
    pub birth: f64,
    /// `f64::INFINITY` while the particle is alive.
    pub death: f64,
}

impl ParticleRecord {
    pub fn alive_at(&self, t: f64) -> bool {
        self.birth <= t && t < self.death
    }
}

/// Complete event log of one run: every particle ever born, with parent
/// pointers into the same table.
#[derive(Debug, Clone, PartialEq)]
pub struct GenealogyLog {
    pub n: u32,
    pub records: Vec<ParticleRecord>,
    pub end_time: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParticleError {
    #[error(transparent)]
    Config(#[from] DomainError),
    #[error("event cap {cap} exceeded at simulation time {time:.4}")]
    EventCapExceeded { cap: u64, time: f64 },
    #[error("query at time {time:.4}, depth {depth:.4} leaves the simulated window [0, {end:.4}]")]
    QueryWindow { time: f64, depth: f64, end: f64 },
}

/// Run configuration. The mass scale `n` must be at least 100 and the
/// burn-in at least ten relaxation times `10/(2 beta theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleConfig {
    pub params: ModelParams,
    pub n: u32,
    pub burn_in: f64,
    pub horizon: f64,
    pub max_events: u64,
}

pub const DEFAULT_EVENT_CAP: u64 = 50_000_000;

impl ParticleConfig {
    pub fn new(params: ModelParams, n: u32, burn_in: f64, horizon: f64) -> Result<Self, DomainError> {
        if n < 100 {
            return Err(DomainError::new("ParticleConfig", f64::from(n), "need n >= 100"));
        }
        let min_burn = 10.0 / params.decay_rate();
        if !(burn_in >= min_burn) {
            return Err(DomainError::new(
                "ParticleConfig",
                burn_in,
                "burn-in shorter than ten relaxation times",
            ));
        }
        if !(horizon > 0.0) {
            return Err(DomainError::new("ParticleConfig", horizon, "horizon must be > 0"));
        }
        Ok(Self { params, n, burn_in, horizon, max_events: DEFAULT_EVENT_CAP })
    }

    pub fn with_event_cap(mut self, cap: u64) -> Self {
        self.max_events = cap;
        self
    }

    pub fn end_time(&self) -> f64 {
        self.burn_in + self.horizon
    }
}

// ---------------------------------------------------------------------------
// engine

struct Engine<'r, R: Rng> {
    rng: &'r mut R,
    records: Vec<ParticleRecord>,
    alive: Vec<u32>,
    time: f64,
    events: u64,
    max_events: u64,
    imm_rate: f64,
    per_particle: f64,
    split_frac: f64,
    /// Exponential work left over from a clock that straddled a stop time;
    /// carrying it across the stop keeps the event sequence identical to an
    /// uninterrupted run on the same stream.
    pending_work: f64,
    // time integrals of the raw particle count and its square
    mass_int: f64,
    mass_sq_int: f64,
}

impl<'r, R: Rng> Engine<'r, R> {
    fn new(config: &ParticleConfig, rng: &'r mut R, max_events: u64) -> Self {
        let beta = config.params.beta();
        let nf = f64::from(config.n);
        let split = beta * nf;
        let death = beta * nf + config.params.decay_rate();
        Engine {
            rng,
            records: Vec::with_capacity(1 << 16),
            alive: Vec::with_capacity(1 << 12),
            time: 0.0,
            events: 0,
            max_events,
            imm_rate: 2.0 * beta * nf,
            per_particle: split + death,
            split_frac: split / (split + death),
            pending_work: 0.0,
            mass_int: 0.0,
            mass_sq_int: 0.0,
        }
    }

    /// Advance the clock to exactly `t_stop`, applying every event strictly
    /// before it.
    fn advance_to(&mut self, t_stop: f64) -> Result<(), ParticleError> {
        loop {
            let count = self.alive.len() as f64;
            let total = count * self.per_particle + self.imm_rate;
            if self.pending_work <= 0.0 {
                self.pending_work = Exp1.sample(self.rng);
            }
            let dt = self.pending_work / total;
            if self.time + dt >= t_stop {
                let span = t_stop - self.time;
                self.pending_work -= span * total;
                self.mass_int += count * span;
                self.mass_sq_int += count * count * span;
                self.time = t_stop;
                return Ok(());
            }
            self.pending_work = 0.0;
            self.mass_int += count * dt;
            self.mass_sq_int += count * count * dt;
            self.time += dt;
            self.events += 1;
            if self.events > self.max_events {
                return Err(ParticleError::EventCapExceeded { cap: self.max_events, time: self.time });
            }
            let u: f64 = self.rng.random::<f64>() * total;
            if u < self.imm_rate {
                let id = self.records.len() as u32;
                self.records.push(ParticleRecord {
                    parent: IMMORTAL_PARENT,
                    birth: self.time,
                    death: f64::INFINITY,
                });
                self.alive.push(id);
            } else {
                let v = (u - self.imm_rate) / self.per_particle;
                let mut i = v as usize;
                if i >= self.alive.len() {
                    i = self.alive.len() - 1;
                }
                if v - (i as f64) < self.split_frac {
                    let parent = self.alive[i];
                    let id = self.records.len() as u32;
                    self.records.push(ParticleRecord {
                        parent: i64::from(parent),
                        birth: self.time,
                        death: f64::INFINITY,
                    });
                    self.alive.push(id);
                } else {
                    let pid = self.alive.swap_remove(i);
                    self.records[pid as usize].death = self.time;
                }
            }
        }
    }

    fn into_log(self, n: u32) -> GenealogyLog {
        GenealogyLog { n, records: self.records, end_time: self.time }
    }
}

// ---------------------------------------------------------------------------
// reduced lineage forest walks

/// Scratch buffers for upward walks over a particle table.
struct ReducedWalk {
    epoch: u32,
    visited: Vec<u32>,
    /// Per visited node: latest chain-child birth, or the observation time
    /// for particles alive then; the node is a counted ancestor at backward
    /// depth `r` exactly when `tau - m < r <= tau - birth`.
    m_latest: Vec<f64>,
    reduced: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq)]
struct SnapshotStats {
    alive_count: u64,
    depth_counts: Vec<u64>,
    /// Raw truncated tree length (no mass compensation).
    tree_length: f64,
}

impl ReducedWalk {
    fn new() -> Self {
        ReducedWalk { epoch: 0, visited: Vec::new(), m_latest: Vec::new(), reduced: Vec::new() }
    }

    fn run<'a>(
        &mut self,
        records: &[ParticleRecord],
        alive: impl Iterator<Item = &'a u32>,
        tau: f64,
        length_eps: f64,
        depths: &[f64],
    ) -> SnapshotStats {
        self.epoch += 1;
        if self.visited.len() < records.len() {
            self.visited.resize(records.len(), 0);
            self.m_latest.resize(records.len(), 0.0);
        }
        self.reduced.clear();

        let mut alive_count = 0u64;
        for &root in alive {
            alive_count += 1;
            let mut child_birth = tau; // alive particles count all the way to tau
            let mut cur = i64::from(root);
            while cur != IMMORTAL_PARENT {
                let idx = cur as usize;
                if self.visited[idx] == self.epoch {
                    if child_birth > self.m_latest[idx] {
                        self.m_latest[idx] = child_birth;
                    }
                    break;
                }
                self.visited[idx] = self.epoch;
                self.m_latest[idx] = child_birth;
                self.reduced.push(cur as u32);
                child_birth = records[idx].birth;
                cur = records[idx].parent;
            }
        }

        let mut depth_counts = vec![0u64; depths.len()];
        let mut tree_length = 0.0;
        for &idx in &self.reduced {
            let birth = records[idx as usize].birth;
            let hi = tau - birth;
            let lo = tau - self.m_latest[idx as usize];
            tree_length += (hi - lo.max(length_eps)).max(0.0);
            for (k, &d) in depths.iter().enumerate() {
                if lo < d && d <= hi {
                    depth_counts[k] += 1;
                }
            }
        }
        SnapshotStats { alive_count, depth_counts, tree_length }
    }
}

// ---------------------------------------------------------------------------
// public operations on full logs

/// Simulate the particle system from an empty population at time 0 up to
/// `burn_in + horizon`, recording every particle. Fails with a resource
/// error when the configured event cap is exceeded.
pub fn run_particle_system<R: Rng>(
    config: &ParticleConfig,
    rng: &mut R,
) -> Result<GenealogyLog, ParticleError> {
    let mut engine = Engine::new(config, rng, config.max_events);
    engine.advance_to(config.end_time())?;
    Ok(engine.into_log(config.n))
}

fn alive_at(log: &GenealogyLog, tau: f64) -> Vec<u32> {
    log.records
        .iter()
        .enumerate()
        .filter(|(_, r)| r.alive_at(tau))
        .map(|(i, _)| i as u32)
        .collect()
}

fn check_window(log: &GenealogyLog, time: f64, depth: f64) -> Result<(), ParticleError> {
    if !(depth > 0.0) || time - depth < 0.0 || time > log.end_time {
        return Err(ParticleError::QueryWindow { time, depth, end: log.end_time });
    }
    Ok(())
}

/// Distinct non-immortal ancestors, at backward depth `r` of the population
/// alive at `tau0` and at depth `q` of the population alive at `tau0 + s`.
pub fn two_time_ancestor_counts(
    log: &GenealogyLog,
    tau0: f64,
    s: f64,
    r: f64,
    q: f64,
) -> Result<(u64, u64), ParticleError> {
    check_window(log, tau0, r)?;
    check_window(log, tau0 + s, q)?;
    let mut walk = ReducedWalk::new();
    let first = walk.run(&log.records, alive_at(log, tau0).iter(), tau0, f64::INFINITY, &[r]);
    let second = walk.run(&log.records, alive_at(log, tau0 + s).iter(), tau0 + s, f64::INFINITY, &[q]);
    Ok((first.depth_counts[0], second.depth_counts[0]))
}

/// The `eps`-truncated compensated genealogical lengths at observation
/// times `tau0` and `tau0 + s`, using the rescaled particle count as the
/// compensating mass.
pub fn compensated_length_pair(
    log: &GenealogyLog,
    params: &ModelParams,
    tau0: f64,
    s: f64,
    eps: f64,
) -> Result<(f64, f64), ParticleError> {
    if !(eps > 0.0) {
        return Err(DomainError::new("compensated_length_pair", eps, "eps must be > 0").into());
    }
    check_window(log, tau0, eps)?;
    check_window(log, tau0 + s, eps)?;
    let tail = kernel::tail_rate_integral(params, eps).map_err(ParticleError::Config)?;
    let nf = f64::from(log.n);
    let mut walk = ReducedWalk::new();
    let mut one = |tau: f64| {
        let stats = walk.run(&log.records, alive_at(log, tau).iter(), tau, eps, &[]);
        stats.tree_length - stats.alive_count as f64 / nf * tail
    };
    Ok((one(tau0), one(tau0 + s)))
}

// ---------------------------------------------------------------------------
// streaming campaign

/// Observation plan for a replicated campaign: snapshots every `spacing`
/// time units after burn-in; consecutive snapshots form the lag pairs for
/// the population product and the length covariance, and each snapshot
/// pairs with a sub-snapshot `cross_offset` later for the two-time
/// ancestor-count product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CampaignConfig {
    pub base: ParticleConfig,
    pub replicates: u32,
    pub spacing: f64,
    pub cross_offset: f64,
    /// Depth of the first cross count, taken at each snapshot.
    pub cross_depth_first: f64,
    /// Depth of the second cross count, taken at snapshot + offset.
    pub cross_depth_second: f64,
    pub length_eps: f64,
    /// Depths sampled for distribution comparisons against exact samplers.
    pub ks_depths: [f64; 2],
}

impl CampaignConfig {
    /// The observation set used by the verification suite: lag pairs at the
    /// snapshot spacing, cross counts at depths (1.0, 0.8) with offset 0.3,
    /// lengths truncated at 0.01.
    pub fn standard(base: ParticleConfig, replicates: u32) -> Self {
        CampaignConfig {
            base,
            replicates,
            spacing: 0.5,
            cross_offset: 0.3,
            cross_depth_first: 1.0,
            cross_depth_second: 0.8,
            length_eps: 0.01,
            ks_depths: [0.5, 1.0],
        }
    }
}

/// Per-replicate accumulated statistics; products are means over the
/// replicate's snapshot pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicateSummary {
    pub time_avg_mass: f64,
    pub time_avg_mass_sq: f64,
    pub first_half_mass: f64,
    pub second_half_mass: f64,
    pub mean_lag_product: f64,
    pub mean_cross_product: f64,
    pub mean_length_product: f64,
    pub mean_length: f64,
    pub mean_length_sq: f64,
    pub snapshots: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignResult {
    pub replicates: Vec<ReplicateSummary>,
    /// Pooled ancestor-count samples at `ks_depths[0]` and `ks_depths[1]`.
    pub counts_first_depth: Vec<u64>,
    pub counts_second_depth: Vec<u64>,
    pub total_events: u64,
}

#[derive(Clone, Copy)]
enum Obs {
    Snapshot(u32),
    Sub,
    Mid,
    /// Table compaction only; keeps the working set cache-resident.
    Compact,
    End,
}

/// Spacing of pure-compaction stops; chosen so the particle table stays a
/// few hundred thousand rows at the default scales.
const COMPACT_INTERVAL: f64 = 0.1;

fn run_replicate<R: Rng>(
    cfg: &CampaignConfig,
    rng: &mut R,
) -> Result<(ReplicateSummary, Vec<u64>, Vec<u64>, u64), ParticleError> {
    let base = &cfg.base;
    let nf = f64::from(base.n);
    let snapshots = (base.horizon / cfg.spacing).floor() as u32;
    assert!(snapshots >= 2, "campaign horizon too short for its spacing");

    let mut schedule: Vec<(f64, Obs)> = Vec::new();
    for k in 0..=snapshots {
        let t = base.burn_in + f64::from(k) * cfg.spacing;
        schedule.push((t, Obs::Snapshot(k)));
        if f64::from(k) * cfg.spacing + cfg.cross_offset <= base.horizon {
            schedule.push((t + cfg.cross_offset, Obs::Sub));
        }
    }
    schedule.push((base.burn_in + 0.5 * base.horizon, Obs::Mid));
    schedule.push((base.end_time(), Obs::End));
    let compactions = (base.end_time() / COMPACT_INTERVAL).ceil() as u32;
    for j in 1..compactions {
        schedule.push((f64::from(j) * COMPACT_INTERVAL, Obs::Compact));
    }
    schedule.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let tail = kernel::tail_rate_integral(&base.params, cfg.length_eps).map_err(ParticleError::Config)?;
    let mut engine = Engine::new(base, rng, u64::MAX);
    let mut walk = ReducedWalk::new();

    let depths_full = [cfg.ks_depths[0], cfg.ks_depths[1], cfg.cross_depth_first];
    let mut counts_a = Vec::with_capacity(snapshots as usize + 1);
    let mut counts_b = Vec::with_capacity(snapshots as usize + 1);

    let mut baseline = (0.0, 0.0);
    let mut mid_mass = 0.0;
    let mut prev_mass = 0.0;
    let mut prev_len = 0.0;
    let mut cross_first = 0.0;
    let mut sums = ReplicateSummary {
        time_avg_mass: 0.0,
        time_avg_mass_sq: 0.0,
        first_half_mass: 0.0,
        second_half_mass: 0.0,
        mean_lag_product: 0.0,
        mean_cross_product: 0.0,
        mean_length_product: 0.0,
        mean_length: 0.0,
        mean_length_sq: 0.0,
        snapshots: 0,
    };
    let mut lag_pairs = 0u64;
    let mut cross_pairs = 0u64;

    for &(t, obs) in &schedule {
        engine.advance_to(t)?;
        match obs {
            Obs::Snapshot(k) => {
                let stats =
                    walk.run(&engine.records, engine.alive.iter(), t, cfg.length_eps, &depths_full);
                let mass = stats.alive_count as f64 / nf;
                let len = stats.tree_length - mass * tail;
                counts_a.push(stats.depth_counts[0]);
                counts_b.push(stats.depth_counts[1]);
                cross_first = stats.depth_counts[2] as f64;
                sums.mean_length += len;
                sums.mean_length_sq += len * len;
                sums.snapshots += 1;
                if k == 0 {
                    baseline = (engine.mass_int, engine.mass_sq_int);
                } else {
                    sums.mean_lag_product += prev_mass * mass;
                    sums.mean_length_product += prev_len * len;
                    lag_pairs += 1;
                }
                prev_mass = mass;
                prev_len = len;
            }
            Obs::Sub => {
                let stats = walk.run(
                    &engine.records,
                    engine.alive.iter(),
                    t,
                    f64::INFINITY,
                    std::slice::from_ref(&cfg.cross_depth_second),
                );
                sums.mean_cross_product += cross_first * stats.depth_counts[0] as f64;
                cross_pairs += 1;
            }
            Obs::Mid => mid_mass = engine.mass_int,
            Obs::Compact => {
                if engine.records.len() > 100_000 {
                    simplify(&mut engine, &mut walk);
                }
            }
            Obs::End => {}
        }
    }

    let span = base.horizon;
    sums.time_avg_mass = (engine.mass_int - baseline.0) / span / nf;
    sums.time_avg_mass_sq = (engine.mass_sq_int - baseline.1) / span / (nf * nf);
    sums.first_half_mass = (mid_mass - baseline.0) / (0.5 * span) / nf;
    sums.second_half_mass = (engine.mass_int - mid_mass) / (0.5 * span) / nf;
    sums.mean_lag_product /= lag_pairs as f64;
    sums.mean_length_product /= lag_pairs as f64;
    sums.mean_cross_product /= cross_pairs as f64;
    sums.mean_length /= sums.snapshots as f64;
    sums.mean_length_sq /= sums.snapshots as f64;
    Ok((sums, counts_a, counts_b, engine.events))
}

/// Rewrite the particle table down to the reduced forest of the living
/// population. Parent pointers of kept nodes always land on kept nodes, so
/// no backward query from any later time can see the difference.
fn simplify<R: Rng>(engine: &mut Engine<'_, R>, walk: &mut ReducedWalk) {
    walk.run(&engine.records, engine.alive.iter(), engine.time, f64::INFINITY, &[]);
    let epoch = walk.epoch;
    let mut remap: Vec<u32> = vec![u32::MAX; engine.records.len()];
    let mut kept: Vec<ParticleRecord> = Vec::with_capacity(walk.reduced.len() + 16);
    for (idx, rec) in engine.records.iter().enumerate() {
        if walk.visited[idx] == epoch {
            remap[idx] = kept.len() as u32;
            kept.push(*rec);
        }
    }
    for rec in &mut kept {
        if rec.parent != IMMORTAL_PARENT {
            let new = remap[rec.parent as usize];
            debug_assert!(new != u32::MAX, "parent of a kept chain node must be kept");
            rec.parent = i64::from(new);
        }
    }
    for id in &mut engine.alive {
        *id = remap[*id as usize];
        debug_assert!(*id != u32::MAX);
    }
    engine.records = kept;
}

/// Run `replicates` independent copies of the system on sub-streams of
/// `stream`, in parallel, with deterministic aggregation order.
pub fn run_campaign(
    cfg: &CampaignConfig,
    stream: crate::rng::RandomStream,
) -> Result<CampaignResult, ParticleError> {
    let runs: Vec<Result<_, ParticleError>> = (0..cfg.replicates)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream.substream(u64::from(i)).rng();
            run_replicate(cfg, &mut rng)
        })
        .collect();
    let mut replicates = Vec::with_capacity(runs.len());
    let mut counts_first = Vec::new();
    let mut counts_second = Vec::new();
    let mut total_events = 0;
    for run in runs {
        let (summary, a, b, events) = run?;
        replicates.push(summary);
        counts_first.extend(a);
        counts_second.extend(b);
        total_events += events;
    }
    Ok(CampaignResult {
        replicates,
        counts_first_depth: counts_first,
        counts_second_depth: counts_second,
        total_events,
    })
}
