//! Instance data model: depot, clients, their packages and the fleet.
//!
//! Nodes are numbered as on the routing graph: node 0 is the depot and
//! clients are nodes `1..=n`. Packages are stored in one flat list grouped by
//! client, and addressed by [`PackageId`] (their position in that list).

mod augment;
mod generate;
mod text;

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

pub use augment::{augment, Transform};
pub use generate::{fleet_size, generate, GenParams};
pub use text::{parse_gendreau, parse_instance_text, to_instance_text};

/// Version tag written into every native JSON document.
pub const FORMAT_VERSION: u32 = 1;

/// Homogeneous vehicle loading space, in voxels, plus its weight capacity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VehicleSpec {
    pub height: u32,
    pub width: u32,
    pub length: u32,
    pub weight_capacity: f64,
}

impl VehicleSpec {
    pub fn new(height: u32, width: u32, length: u32, weight_capacity: f64) -> Result<Self> {
        let spec = Self {
            height,
            width,
            length,
            weight_capacity,
        };
        spec.check()?;
        Ok(spec)
    }

    pub fn check(&self) -> Result<()> {
        if self.height == 0 || self.width == 0 || self.length == 0 {
            return Err(Error::InvalidVehicle(format!(
                "dimensions must be positive, got {}x{}x{}",
                self.height, self.width, self.length
            )));
        }
        if !(self.weight_capacity.is_finite() && self.weight_capacity > 0.0) {
            return Err(Error::InvalidVehicle(format!(
                "weight capacity must be positive, got {}",
                self.weight_capacity
            )));
        }
        Ok(())
    }

    pub fn volume(&self) -> u64 {
        self.height as u64 * self.width as u64 * self.length as u64
    }
}

/// Index of a package in [`Instance::packages`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PackageId(pub usize);

impl fmt::Display for PackageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// One item to deliver. Dimensions are voxel counts; `index` is the 1-based
/// position of the package among its client's packages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Package {
    pub client: usize,
    pub index: usize,
    pub height: u32,
    pub width: u32,
    pub length: u32,
    pub weight: f64,
    pub fragile: bool,
}

impl Package {
    pub fn volume(&self) -> u64 {
        self.height as u64 * self.width as u64 * self.length as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Client {
    pub id: usize,
    #[serde(flatten)]
    pub location: Point,
}

/// A validated problem instance. Construct with [`Instance::new`] or by
/// deserialising the native JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceDoc", into = "InstanceDoc")]
pub struct Instance {
    name: String,
    depot: Point,
    clients: Vec<Client>,
    packages: Vec<Package>,
    vehicle: VehicleSpec,
    fleet_size: usize,
    by_client: Vec<Range<usize>>,
}

impl Instance {
    /// Builds an instance from client locations (client `i + 1` is at
    /// `clients[i]`) and packages in any order. Packages are sorted by
    /// `(client, index)`.
    pub fn new(
        name: impl Into<String>,
        depot: Point,
        clients: Vec<Point>,
        mut packages: Vec<Package>,
        vehicle: VehicleSpec,
        fleet_size: usize,
    ) -> Result<Self> {
        vehicle.check()?;
        if clients.is_empty() {
            return Err(Error::NoClients);
        }
        if fleet_size == 0 {
            return Err(Error::InvalidInstance("fleet size must be at least 1".into()));
        }
        if !depot.is_finite() || clients.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInstance("coordinates must be finite".into()));
        }
        let n = clients.len();
        packages.sort_by_key(|p| (p.client, p.index));
        let mut by_client = vec![0..0; n + 1];
        let mut start = 0;
        while start < packages.len() {
            let client = packages[start].client;
            if client == 0 || client > n {
                return Err(Error::InvalidInstance(format!(
                    "package references unknown client {client}"
                )));
            }
            let mut end = start;
            while end < packages.len() && packages[end].client == client {
                let p = &packages[end];
                if p.index != end - start + 1 {
                    return Err(Error::InvalidInstance(format!(
                        "client {client} packages must be numbered 1..m without gaps"
                    )));
                }
                if p.height == 0 || p.width == 0 || p.length == 0 {
                    return Err(Error::InvalidInstance(format!(
                        "package {} of client {client} has a zero dimension",
                        p.index
                    )));
                }
                if !(p.weight.is_finite() && p.weight >= 0.0) {
                    return Err(Error::InvalidInstance(format!(
                        "package {} of client {client} has invalid weight {}",
                        p.index, p.weight
                    )));
                }
                end += 1;
            }
            by_client[client] = start..end;
            start = end;
        }
        if let Some(c) = (1..=n).find(|&c| by_client[c].is_empty()) {
            return Err(Error::InvalidInstance(format!("client {c} has no packages")));
        }
        let clients = clients
            .into_iter()
            .enumerate()
            .map(|(i, location)| Client { id: i + 1, location })
            .collect();
        Ok(Self {
            name: name.into(),
            depot,
            clients,
            packages,
            vehicle,
            fleet_size,
            by_client,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn depot(&self) -> Point {
        self.depot
    }

    pub fn clients(&self) -> &[Client] {
        &self.clients
    }

    /// Number of clients `n`.
    pub fn num_clients(&self) -> usize {
        self.clients.len()
    }

    pub fn packages(&self) -> &[Package] {
        &self.packages
    }

    pub fn num_packages(&self) -> usize {
        self.packages.len()
    }

    pub fn package(&self, id: PackageId) -> Option<&Package> {
        self.packages.get(id.0)
    }

    pub fn vehicle(&self) -> &VehicleSpec {
        &self.vehicle
    }

    pub fn fleet_size(&self) -> usize {
        self.fleet_size
    }

    /// Location of a graph node (0 is the depot).
    pub fn location(&self, node: usize) -> Option<Point> {
        match node {
            0 => Some(self.depot),
            c => self.clients.get(c - 1).map(|c| c.location),
        }
    }

    /// Package ids belonging to `client`; empty for the depot or unknown ids.
    pub fn package_ids_of(&self, client: usize) -> impl Iterator<Item = PackageId> {
        self.by_client.get(client).cloned().unwrap_or(0..0).map(PackageId)
    }

    pub fn client_weight(&self, client: usize) -> f64 {
        self.package_ids_of(client).map(|id| self.packages[id.0].weight).sum()
    }

    pub fn total_volume(&self) -> u64 {
        self.packages.iter().map(Package::volume).sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.packages.iter().map(|p| p.weight).sum()
    }

    /// A copy with every node moved by `f`; packages, vehicle and fleet are
    /// untouched.
    pub fn map_locations(&self, mut f: impl FnMut(Point) -> Point) -> Self {
        let mut out = self.clone();
        out.depot = f(self.depot);
        for c in &mut out.clients {
            c.location = f(c.location);
        }
        out
    }

    pub fn with_fleet_size(&self, fleet_size: usize) -> Result<Self> {
        if fleet_size == 0 {
            return Err(Error::InvalidInstance("fleet size must be at least 1".into()));
        }
        let mut out = self.clone();
        out.fleet_size = fleet_size;
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct InstanceDoc {
    format_version: u32,
    name: String,
    depot: Point,
    clients: Vec<Client>,
    vehicle: VehicleSpec,
    fleet_size: usize,
    packages: Vec<Package>,
}

impl TryFrom<InstanceDoc> for Instance {
    type Error = Error;

    fn try_from(doc: InstanceDoc) -> Result<Self> {
        if doc.format_version != FORMAT_VERSION {
            return Err(Error::InvalidInstance(format!(
                "unsupported format_version {}",
                doc.format_version
            )));
        }
        let mut clients = doc.clients;
        clients.sort_by_key(|c| c.id);
        if clients.iter().enumerate().any(|(i, c)| c.id != i + 1) {
            return Err(Error::InvalidInstance("client ids must be 1..n".into()));
        }
        Instance::new(
            doc.name,
            doc.depot,
            clients.into_iter().map(|c| c.location).collect(),
            doc.packages,
            doc.vehicle,
            doc.fleet_size,
        )
    }
}

impl From<Instance> for InstanceDoc {
    fn from(inst: Instance) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            name: inst.name,
            depot: inst.depot,
            clients: inst.clients,
            vehicle: inst.vehicle,
            fleet_size: inst.fleet_size,
            packages: inst.packages,
        }
    }
}
