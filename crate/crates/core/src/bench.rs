//! Wall-clock scaling of greedy rollouts with the number of clients.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::env::EnvConfig;
use crate::error::{Error, Result};
use crate::instance::{generate, GenParams};
use crate::policy::{rollout, GreedyNearest};

/// Environment variable capping the worker threads used for rollouts.
pub const THREADS_VAR: &str = "CARGO_ROUTE_THREADS";

/// Thread cap from [`THREADS_VAR`], if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_VAR).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    pub sizes: Vec<usize>,
    pub repetitions: usize,
    pub seed: u64,
    /// Concurrent rollouts. One keeps timings free of contention.
    pub threads: usize,
    pub penalty: f64,
    pub env: EnvConfig,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            sizes: (1..=10).map(|k| k * 10).collect(),
            repetitions: 5,
            seed: 0,
            threads: 1,
            penalty: crate::DEFAULT_PENALTY,
            env: EnvConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub mean_seconds: f64,
    pub min_seconds: f64,
    pub max_seconds: f64,
    pub mean_steps: f64,
    pub mean_checks: f64,
    pub mean_missed: f64,
}

/// Ordinary least squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Least-squares fit. Needs at least two distinct x values. When every y is
/// equal the fit is exact and R² is 1.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    Some(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    pub fit: LinearFit,
    pub total_seconds: f64,
}

impl ScalingReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,mean_seconds,min_seconds,max_seconds,mean_steps,mean_checks,mean_missed\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{:.9},{:.9},{:.9},{},{},{}\n",
                r.n, r.mean_seconds, r.min_seconds, r.max_seconds, r.mean_steps, r.mean_checks, r.mean_missed
            ));
        }
        out
    }
}

/// Times greedy rollouts on generated instances of every size. Instance
/// generation is not timed. Repetition `r` of size `n` uses seed
/// `seed + r`.
pub fn scaling(config: &ScalingConfig) -> Result<ScalingReport> {
    if config.repetitions == 0 || config.threads == 0 {
        return Err(Error::InvalidInstance("repetitions and threads must be positive".into()));
    }
    if let Some(&n) = config.sizes.iter().find(|&&n| n < 2) {
        return Err(Error::InvalidInstance(format!("benchmark sizes must be at least 2, got {n}")));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::InvalidInstance(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let mut rows = Vec::with_capacity(config.sizes.len());
    for &n in &config.sizes {
        let instances = (0..config.repetitions as u64)
            .map(|r| generate(&GenParams::default().with_n(n).with_seed(config.seed + r)).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        let runs = pool.install(|| {
            instances
                .par_iter()
                .map(|inst| rollout(&GreedyNearest, Arc::clone(inst), config.env, config.penalty))
                .collect::<Result<Vec<_>>>()
        })?;
        let secs: Vec<f64> = runs.iter().map(|r| r.elapsed.as_secs_f64()).collect();
        let k = runs.len() as f64;
        rows.push(ScalingRow {
            n,
            mean_seconds: secs.iter().sum::<f64>() / k,
            min_seconds: secs.iter().copied().fold(f64::INFINITY, f64::min),
            max_seconds: secs.iter().copied().fold(0.0, f64::max),
            mean_steps: runs.iter().map(|r| r.steps as f64).sum::<f64>() / k,
            mean_checks: runs.iter().map(|r| r.checks as f64).sum::<f64>() / k,
            mean_missed: runs.iter().map(|r| r.cost.missed as f64).sum::<f64>() / k,
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.mean_seconds).collect();
    let fit = linear_fit(&xs, &ys)
        .ok_or_else(|| Error::InvalidInstance("need at least two distinct benchmark sizes".into()))?;
    Ok(ScalingReport {
        rows,
        fit,
        total_seconds: start.elapsed().as_secs_f64(),
    })
}
