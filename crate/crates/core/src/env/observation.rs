//! What a policy sees at each step, and its flat-array encoding.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::container::ObservationGrid;
use crate::geometry::Point;
use crate::instance::PackageId;

/// Static per-package features. Dimensions are relative to the vehicle and
/// the weight is relative to the vehicle capacity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PackageFeatures {
    pub client: usize,
    /// Scaled (height, width, length).
    pub dims: [f64; 3],
    pub fragile: bool,
    pub weight: f64,
    /// Volume in voxels.
    pub volume: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub depot: Point,
    /// Client `i` is at `clients[i - 1]`.
    pub clients: Arc<[Point]>,
    pub packages: Arc<[PackageFeatures]>,
    /// Remaining weight capacity of the active vehicle as a fraction.
    pub remaining_capacity: f64,
    /// Signed heightmap of the active vehicle.
    pub grid: ObservationGrid,
    /// Stage-one mask over packages.
    pub mask: Vec<bool>,
    pub active_vehicle: usize,
    /// Last client loaded into the active vehicle, or 0 (the depot).
    pub current_node: usize,
    /// Client whose packages are partially loaded.
    pub open_client: Option<usize>,
    pub step: usize,
    pub done: bool,
}

impl Observation {
    pub fn node_location(&self, node: usize) -> Point {
        if node == 0 {
            self.depot
        } else {
            self.clients[node - 1]
        }
    }

    pub fn unmasked(&self) -> impl Iterator<Item = PackageId> + '_ {
        self.mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| PackageId(i))
    }

    /// Row-major numeric arrays for foreign consumers.
    pub fn to_arrays(&self) -> ObservationArrays {
        let n = self.clients.len();
        let mut nodes = Vec::with_capacity((n + 1) * 2);
        nodes.extend([self.depot.x, self.depot.y]);
        for c in self.clients.iter() {
            nodes.extend([c.x, c.y]);
        }
        let mut packages = Vec::with_capacity(self.packages.len() * 5);
        for p in self.packages.iter() {
            packages.extend([p.dims[0], p.dims[1], p.dims[2], f64::from(u8::from(p.fragile)), p.weight]);
        }
        ObservationArrays {
            header: ArrayHeader {
                nodes: [n + 1, 2],
                packages: [self.packages.len(), 5],
                grid: [self.grid.rows, self.grid.cols],
                mask: [self.mask.len()],
                remaining_capacity: self.remaining_capacity,
                active_vehicle: self.active_vehicle,
                current_node: self.current_node,
                open_client: self.open_client,
                step: self.step,
                done: self.done,
            },
            nodes,
            packages,
            grid: self.grid.values.clone(),
            mask: self.mask.iter().map(|&m| u8::from(m)).collect(),
        }
    }
}

/// Shapes and scalars describing [`ObservationArrays`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayHeader {
    pub nodes: [usize; 2],
    pub packages: [usize; 2],
    pub grid: [usize; 2],
    pub mask: [usize; 1],
    pub remaining_capacity: f64,
    pub active_vehicle: usize,
    pub current_node: usize,
    pub open_client: Option<usize>,
    pub step: usize,
    pub done: bool,
}

/// Flat observation buffers. `nodes` holds the depot then clients as
/// `(x, y)`; `packages` holds `(height, width, length, fragile, weight)` per
/// package; `grid` is the scaled heightmap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationArrays {
    pub header: ArrayHeader,
    pub nodes: Vec<f64>,
    pub packages: Vec<f64>,
    pub grid: Vec<f64>,
    pub mask: Vec<u8>,
}
