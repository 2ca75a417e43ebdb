//! Finished episodes: per-vehicle routes and package placements.

use serde::{Deserialize, Serialize};

pub use crate::container::{Extent, Placement};
use crate::error::Result;
use crate::instance::{Instance, PackageId};

/// A package as it sits in a vehicle. `extent` is the placed box size along
/// (height, width, length); `load_order` counts loads within the vehicle
/// starting from zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoadedPackage {
    pub package: PackageId,
    pub placement: Placement,
    pub extent: Extent,
    pub load_order: usize,
}

/// One vehicle's trip. `route` lists graph nodes in visiting order and
/// includes the depot (node 0) at both ends.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct VehiclePlan {
    pub route: Vec<usize>,
    pub packages: Vec<LoadedPackage>,
}

impl VehiclePlan {
    /// Builds a depot-to-depot route over `clients`.
    pub fn from_clients(clients: &[usize], packages: Vec<LoadedPackage>) -> Self {
        let mut route = Vec::with_capacity(clients.len() + 2);
        route.push(0);
        route.extend_from_slice(clients);
        route.push(0);
        Self { route, packages }
    }

    /// Visited clients in order (every non-depot node of the route).
    pub fn clients(&self) -> Vec<usize> {
        self.route.iter().copied().filter(|&n| n != 0).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Solution {
    pub vehicles: Vec<VehiclePlan>,
}

impl Solution {
    pub fn loaded_count(&self) -> usize {
        self.vehicles.iter().map(|v| v.packages.len()).sum()
    }

    /// Packages of `instance` that no vehicle carries, in id order.
    pub fn missed(&self, instance: &Instance) -> Vec<PackageId> {
        let mut loaded = vec![false; instance.num_packages()];
        for v in &self.vehicles {
            for lp in &v.packages {
                if let Some(slot) = loaded.get_mut(lp.package.0) {
                    *slot = true;
                }
            }
        }
        (0..instance.num_packages())
            .filter(|&i| !loaded[i])
            .map(PackageId)
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
