//! Test-only oracles and fixtures shared by the integration suites.
#![allow(dead_code)]

pub mod identities;
pub mod mutations;
pub mod oracle;

use std::path::PathBuf;

use cvrp3d::instance::parse_gendreau;
use cvrp3d::Instance;

/// Directory holding the bundled benchmark instance files.
pub fn data_dir() -> PathBuf {
    std::env::var_os("CVRP3D_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data"))
}

pub fn benchmark(name: &str) -> Instance {
    let path = data_dir().join(format!("{name}.txt"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()));
    parse_gendreau(&text).unwrap_or_else(|e| panic!("parsing {}: {e}", path.display()))
}

/// Greedy rollout cost of `instance` under every transform of the
/// augmentation probe, original first.
pub fn probe_costs(instance: &Instance) -> Vec<(&'static str, f64)> {
    use cvrp3d::env::EnvConfig;
    use cvrp3d::instance::{augment, Transform};
    use cvrp3d::policy::{rollout, GreedyNearest};
    use std::sync::Arc;

    Transform::probe_set()
        .into_iter()
        .map(|(name, t)| {
            let inst = match t {
                Some(t) => augment(instance, t),
                None => instance.clone(),
            };
            let r = rollout(&GreedyNearest, Arc::new(inst), EnvConfig::default(), cvrp3d::DEFAULT_PENALTY).unwrap();
            (name, r.cost.total)
        })
        .collect()
}
