//! Top-down container view used as the packing observation.

use serde::{Deserialize, Serialize};

use super::Container;
use crate::instance::VehicleSpec;

/// Per (w, l) column: the height of the topmost occupied voxel plus one,
/// negated when the package on top is fragile; zero for empty columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedHeightMap {
    pub width: usize,
    pub length: usize,
    /// Row-major over (w, l).
    pub values: Vec<i32>,
}

impl SignedHeightMap {
    pub fn get(&self, w: usize, l: usize) -> i32 {
        self.values[w * self.length + l]
    }
}

impl Container {
    pub fn signed_heightmap(&self) -> SignedHeightMap {
        let (hv, wv, lv) = (self.spec.height, self.spec.width, self.spec.length);
        let mut values = vec![0; (wv * lv) as usize];
        for w in 0..wv {
            for l in 0..lv {
                if let Some((h, top)) = (0..hv).rev().find_map(|h| self.occupant(h, w, l).map(|b| (h, b))) {
                    let mag = h as i32 + 1;
                    values[(w * lv + l) as usize] = if top.fragile { -mag } else { mag };
                }
            }
        }
        SignedHeightMap {
            width: wv as usize,
            length: lv as usize,
            values,
        }
    }
}

/// A heightmap scaled to `[-1, 1]` and resized to a fixed grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationGrid {
    pub rows: usize,
    pub cols: usize,
    /// Row-major over (rows = width axis, cols = length axis).
    pub values: Vec<f64>,
}

/// Divides heights by the vehicle height and resamples the map onto a
/// `target = (rows, cols)` grid by nearest neighbour, which keeps the
/// fragility sign of every cell intact.
pub fn observation_grid(map: &SignedHeightMap, spec: &VehicleSpec, target: (usize, usize)) -> ObservationGrid {
    let (rows, cols) = target;
    let scale = spec.height as f64;
    let mut values = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let w = r * map.width / rows;
        for c in 0..cols {
            let l = c * map.length / cols;
            values.push(map.get(w, l) as f64 / scale);
        }
    }
    ObservationGrid { rows, cols, values }
}
