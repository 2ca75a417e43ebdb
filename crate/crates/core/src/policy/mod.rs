//! Action-ranking policies and rollouts.
//!
//! A policy turns an [`Observation`] into a ranking of the admissible
//! packages. The environment enforces every loading rule itself, so any
//! ranking yields a valid solution; policies only influence its quality.

mod local_search;

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::CostBreakdown;
use crate::env::{EnvConfig, Episode, Observation, StepEvent};
use crate::error::Result;
use crate::geometry::euclidean_distance;
use crate::instance::{Instance, PackageId};
use crate::solution::Solution;

pub use local_search::{local_search, repack};

pub trait Policy: Send + Sync {
    fn name(&self) -> &str;

    /// Every unmasked package exactly once, most preferred first.
    fn rank(&self, observation: &Observation) -> Vec<PackageId>;
}

/// Finishes the open client largest package first; otherwise prefers the
/// client nearest to the last loaded one (the depot for an empty vehicle),
/// ties broken by client id then package id.
#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyNearest;

impl Policy for GreedyNearest {
    fn name(&self) -> &str {
        "greedy"
    }

    fn rank(&self, obs: &Observation) -> Vec<PackageId> {
        let mut ids: Vec<PackageId> = obs.unmasked().collect();
        if obs.open_client.is_some() {
            ids.sort_by_key(|id| (std::cmp::Reverse(obs.packages[id.0].volume), *id));
            return ids;
        }
        let from = obs.node_location(obs.current_node);
        let dist: Vec<f64> = std::iter::once(0.0)
            .chain(obs.clients.iter().map(|&c| euclidean_distance(from, c)))
            .collect();
        ids.sort_by(|a, b| {
            let (ca, cb) = (obs.packages[a.0].client, obs.packages[b.0].client);
            dist[ca].total_cmp(&dist[cb]).then(ca.cmp(&cb)).then(a.cmp(b))
        });
        ids
    }
}

/// A uniform random permutation of the admissible packages, drawn from a
/// stream keyed by the seed and the step number.
#[derive(Debug, Clone, Copy)]
pub struct RandomPolicy {
    pub seed: u64,
}

impl Policy for RandomPolicy {
    fn name(&self) -> &str {
        "random"
    }

    fn rank(&self, obs: &Observation) -> Vec<PackageId> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(obs.step as u64);
        let mut ids: Vec<PackageId> = obs.unmasked().collect();
        ids.shuffle(&mut rng);
        ids
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rollout {
    pub solution: Solution,
    pub cost: CostBreakdown,
    #[serde(with = "secs")]
    pub elapsed: Duration,
    pub steps: usize,
    pub checks: usize,
    /// Package loaded at each step, `None` where the vehicle advanced.
    pub actions: Vec<Option<PackageId>>,
}

mod secs {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        d.as_secs_f64().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_secs_f64(f64::deserialize(d)?))
    }
}

/// Runs one episode to the end with `policy`.
pub fn rollout(policy: &dyn Policy, instance: Arc<Instance>, config: EnvConfig, penalty: f64) -> Result<Rollout> {
    let start = Instant::now();
    let (mut episode, mut obs) = Episode::reset(instance, config)?;
    let mut actions = Vec::new();
    while !episode.is_done() {
        let ranking = policy.rank(&obs);
        let out = episode.step(&ranking)?;
        actions.push(match out.event {
            StepEvent::Loaded { package, .. } => Some(package),
            _ => None,
        });
        obs = out.observation;
    }
    let (solution, cost) = episode.finalize(penalty)?;
    Ok(Rollout {
        solution,
        cost,
        elapsed: start.elapsed(),
        steps: episode.steps(),
        checks: episode.diagnostics().checks,
        actions,
    })
}

/// Replays recorded actions; a `None` step is fed an empty ranking.
pub fn replay(
    instance: Arc<Instance>,
    config: EnvConfig,
    actions: &[Option<PackageId>],
    penalty: f64,
) -> Result<(Solution, CostBreakdown)> {
    let (mut episode, _) = Episode::reset(instance, config)?;
    for a in actions {
        if episode.is_done() {
            break;
        }
        let ranking: Vec<PackageId> = a.iter().copied().collect();
        episode.step(&ranking)?;
    }
    episode.finalize(penalty)
}

/// Rollouts of one policy over many instances, in parallel.
pub fn rollout_batch(
    policy: &dyn Policy,
    instances: &[Arc<Instance>],
    config: EnvConfig,
    penalty: f64,
) -> Vec<Result<Rollout>> {
    instances
        .par_iter()
        .map(|inst| rollout(policy, Arc::clone(inst), config, penalty))
        .collect()
}

#[cfg(test)]
mod tests;
