//! Route lengths and the normalised episode cost.
//!
//! The cost of an episode is `C = C_vrp + C_packing` where
//!
//! * `C_vrp = total distance / (penalty * Σ_i d(depot, client_i))` uses
//!   one-way depot-to-client distances as the normaliser, and
//! * `C_packing = missed packages / n` divides by the number of clients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::euclidean_distance;
use crate::instance::{Instance, Package, VehicleSpec};
use crate::solution::Solution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub total: f64,
    pub vrp: f64,
    pub packing: f64,
    pub penalty: f64,
    /// Sum of depot-to-client distances.
    pub star_distance: f64,
    /// Travelled distance the `vrp` term was computed from.
    pub distance: f64,
    pub missed: usize,
}

impl CostBreakdown {
    pub fn from_distance(distance: f64, missed: usize, instance: &Instance, penalty: f64) -> Result<Self> {
        if !(penalty.is_finite() && penalty > 0.0) {
            return Err(Error::InvalidPenalty(penalty));
        }
        let n = instance.num_clients();
        if n == 0 {
            return Err(Error::NoClients);
        }
        let star = star_distance(instance);
        if star <= 0.0 {
            return Err(Error::DegenerateStar);
        }
        let vrp = distance / (penalty * star);
        let packing = missed as f64 / n as f64;
        Ok(Self {
            total: vrp + packing,
            vrp,
            packing,
            penalty,
            star_distance: star,
            distance,
            missed,
        })
    }
}

/// Sum of one-way distances from the depot to every client.
pub fn star_distance(instance: &Instance) -> f64 {
    let depot = instance.depot();
    instance
        .clients()
        .iter()
        .map(|c| euclidean_distance(depot, c.location))
        .sum()
}

fn node(instance: &Instance, id: usize) -> Result<crate::geometry::Point> {
    instance.location(id).ok_or(Error::UnknownNode(id))
}

/// Length of a node sequence, edge by edge, with no implicit depot.
pub fn path_length(nodes: &[usize], instance: &Instance) -> Result<f64> {
    let mut total = 0.0;
    for pair in nodes.windows(2) {
        total += euclidean_distance(node(instance, pair[0])?, node(instance, pair[1])?);
    }
    Ok(total)
}

/// Length of depot → `clients` in order → depot. An empty route has length 0.
pub fn route_distance(clients: &[usize], instance: &Instance) -> Result<f64> {
    if clients.is_empty() {
        return Ok(0.0);
    }
    let mut seen = vec![false; instance.num_clients() + 1];
    for &c in clients {
        if c == 0 || c > instance.num_clients() {
            return Err(Error::UnknownNode(c));
        }
        if std::mem::replace(&mut seen[c], true) {
            return Err(Error::DuplicateClient(c));
        }
    }
    let mut nodes = Vec::with_capacity(clients.len() + 2);
    nodes.push(0);
    nodes.extend_from_slice(clients);
    nodes.push(0);
    path_length(&nodes, instance)
}

/// Total travelled distance over all vehicle routes.
pub fn total_distance(solution: &Solution, instance: &Instance) -> Result<f64> {
    solution
        .vehicles
        .iter()
        .map(|v| path_length(&v.route, instance))
        .sum()
}

/// Episode cost of `solution` with `missed` undelivered packages.
pub fn cost(solution: &Solution, missed: usize, instance: &Instance, penalty: f64) -> Result<CostBreakdown> {
    CostBreakdown::from_distance(total_distance(solution, instance)?, missed, instance, penalty)
}

/// Package sides relative to the vehicle sides, as (height, width, length).
pub fn scale_dims(package: &Package, vehicle: &VehicleSpec) -> Result<[f64; 3]> {
    if vehicle.height == 0 || vehicle.width == 0 || vehicle.length == 0 {
        return Err(Error::InvalidVehicle("zero vehicle dimension".into()));
    }
    Ok([
        package.height as f64 / vehicle.height as f64,
        package.width as f64 / vehicle.width as f64,
        package.length as f64 / vehicle.length as f64,
    ])
}
