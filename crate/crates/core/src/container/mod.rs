//! Voxelised loading space of a single vehicle.
//!
//! Axis convention: `h` is height (0 is the floor), `w` is width (0 is the
//! right wall) and `l` is length, with `l = 0` at the front wall and the
//! door at `l = length`. "Furthest back, rightmost, lowest" therefore means
//! the smallest `l`, then `w`, then `h`, and unloading slides packages
//! towards increasing `l`.

mod heightmap;
mod prefix;
mod scan;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Package, PackageId, VehicleSpec};
use prefix::Prefix3;

pub use heightmap::{observation_grid, ObservationGrid, SignedHeightMap};
pub use scan::Candidate;

const EMPTY: u32 = u32::MAX;

/// Origin corner of a placed package and whether its width and length are
/// swapped. Only yaw rotation exists; the vertical axis is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Placement {
    pub h: u32,
    pub w: u32,
    pub l: u32,
    pub rotated: bool,
}

/// Size of a placed box along (height, width, length).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Extent {
    pub height: u32,
    pub width: u32,
    pub length: u32,
}

impl Extent {
    pub fn of(package: &Package, rotated: bool) -> Self {
        if rotated {
            Self {
                height: package.height,
                width: package.length,
                length: package.width,
            }
        } else {
            Self {
                height: package.height,
                width: package.width,
                length: package.length,
            }
        }
    }

    pub fn volume(&self) -> u64 {
        self.height as u64 * self.width as u64 * self.length as u64
    }
}

/// An axis-aligned box of voxels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cuboid {
    pub h: u32,
    pub w: u32,
    pub l: u32,
    pub height: u32,
    pub width: u32,
    pub length: u32,
}

impl Cuboid {
    pub fn new(placement: Placement, extent: Extent) -> Self {
        Self {
            h: placement.h,
            w: placement.w,
            l: placement.l,
            height: extent.height,
            width: extent.width,
            length: extent.length,
        }
    }

    pub fn h_end(&self) -> u32 {
        self.h + self.height
    }

    pub fn w_end(&self) -> u32 {
        self.w + self.width
    }

    pub fn l_end(&self) -> u32 {
        self.l + self.length
    }

    pub fn volume(&self) -> u64 {
        self.height as u64 * self.width as u64 * self.length as u64
    }

    pub fn is_empty(&self) -> bool {
        self.height == 0 || self.width == 0 || self.length == 0
    }

    pub fn intersects(&self, other: &Cuboid) -> bool {
        !self.is_empty()
            && !other.is_empty()
            && self.h < other.h_end()
            && other.h < self.h_end()
            && self.w < other.w_end()
            && other.w < self.w_end()
            && self.l < other.l_end()
            && other.l < self.l_end()
    }

    pub fn footprint(&self) -> Footprint {
        Footprint {
            w: self.w,
            l: self.l,
            width: self.width,
            length: self.length,
        }
    }
}

/// A (w, l) rectangle on a horizontal level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Footprint {
    pub w: u32,
    pub l: u32,
    pub width: u32,
    pub length: u32,
}

impl Footprint {
    pub fn area(&self) -> u64 {
        self.width as u64 * self.length as u64
    }

    fn at_level(&self, h: u32) -> Cuboid {
        Cuboid {
            h,
            w: self.w,
            l: self.l,
            height: 1,
            width: self.width,
            length: self.length,
        }
    }
}

/// Which packages obstruct the unloading corridor of a new package.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LifoMode {
    /// Packages of the same client leave at the same stop and never block
    /// each other.
    #[default]
    SameClientExempt,
    /// Every previously loaded package blocks.
    Strict,
}

impl LifoMode {
    pub fn blocks(&self, incoming_client: usize, other_client: usize) -> bool {
        match self {
            LifoMode::SameClientExempt => incoming_client != other_client,
            LifoMode::Strict => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlacementRules {
    /// Minimum supported fraction of a package base when it is not on the floor.
    pub a_min: f64,
    pub lifo: LifoMode,
}

impl Default for PlacementRules {
    fn default() -> Self {
        Self {
            a_min: crate::DEFAULT_A_MIN,
            lifo: LifoMode::SameClientExempt,
        }
    }
}

/// A package resting in a container.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacedBox {
    pub package: PackageId,
    pub client: usize,
    pub fragile: bool,
    pub weight: f64,
    pub rotated: bool,
    pub cuboid: Cuboid,
}

impl PlacedBox {
    pub fn placement(&self) -> Placement {
        Placement {
            h: self.cuboid.h,
            w: self.cuboid.w,
            l: self.cuboid.l,
            rotated: self.rotated,
        }
    }

    pub fn extent(&self) -> Extent {
        Extent {
            height: self.cuboid.height,
            width: self.cuboid.width,
            length: self.cuboid.length,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Container {
    spec: VehicleSpec,
    cells: Vec<u32>,
    boxes: Vec<PlacedBox>,
    weight: f64,
    volume: u64,
    occupied: Prefix3,
    fragile: Prefix3,
    /// Lowest empty level of every (w, l) column, `height` when full.
    lowest_empty: Vec<u32>,
}

impl Container {
    pub fn new(spec: VehicleSpec) -> Result<Self> {
        spec.check()?;
        let (h, w, l) = (spec.height as usize, spec.width as usize, spec.length as usize);
        Ok(Self {
            spec,
            cells: vec![EMPTY; h * w * l],
            boxes: Vec::new(),
            weight: 0.0,
            volume: 0,
            occupied: Prefix3::zeros(h, w, l),
            fragile: Prefix3::zeros(h, w, l),
            lowest_empty: vec![0; w * l],
        })
    }

    pub fn spec(&self) -> &VehicleSpec {
        &self.spec
    }

    pub fn boxes(&self) -> &[PlacedBox] {
        &self.boxes
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn remaining_weight(&self) -> f64 {
        self.spec.weight_capacity - self.weight
    }

    /// Number of occupied voxels.
    pub fn volume(&self) -> u64 {
        self.volume
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    #[inline]
    fn index(&self, h: u32, w: u32, l: u32) -> usize {
        ((h as usize * self.spec.width as usize) + w as usize) * self.spec.length as usize + l as usize
    }

    /// The package occupying a voxel, if any. Out-of-range voxels are empty.
    pub fn occupant(&self, h: u32, w: u32, l: u32) -> Option<&PlacedBox> {
        if h >= self.spec.height || w >= self.spec.width || l >= self.spec.length {
            return None;
        }
        match self.cells[self.index(h, w, l)] {
            EMPTY => None,
            slot => Some(&self.boxes[slot as usize]),
        }
    }

    pub fn contains(&self, c: &Cuboid) -> bool {
        c.h_end() <= self.spec.height && c.w_end() <= self.spec.width && c.l_end() <= self.spec.length
    }

    pub(crate) fn occupied_in(&self, c: &Cuboid) -> u32 {
        self.occupied.sum(c)
    }

    /// True iff `h` is the floor or at least `a_min` of the footprint rests
    /// on occupied voxels directly below.
    pub fn check_support(&self, footprint: Footprint, h: u32, a_min: f64) -> bool {
        if h == 0 {
            return true;
        }
        let below = self.occupied.sum(&footprint.at_level(h - 1));
        below as f64 >= a_min * footprint.area() as f64
    }

    /// False iff a non-fragile package would rest on a fragile one.
    pub fn check_fragility(&self, package: &Package, footprint: Footprint, h: u32) -> bool {
        h == 0 || package.fragile || self.fragile.sum(&footprint.at_level(h - 1)) == 0
    }

    /// False iff `package` is fragile and non-fragile voxels sit directly on
    /// its top face at level `top`, as happens when a box is slid under an
    /// overhang.
    pub fn check_cover(&self, package: &Package, footprint: Footprint, top: u32) -> bool {
        if !package.fragile || top >= self.spec.height {
            return true;
        }
        let level = footprint.at_level(top);
        self.occupied.sum(&level) == self.fragile.sum(&level)
    }

    /// True iff the corridor from the door-side face of `cuboid` to the
    /// door holds no package that blocks `client` under `mode`.
    pub fn check_lifo(&self, cuboid: &Cuboid, client: usize, mode: LifoMode) -> bool {
        let corridor = Cuboid {
            l: cuboid.l_end(),
            length: self.spec.length.saturating_sub(cuboid.l_end()),
            ..*cuboid
        };
        !self
            .boxes
            .iter()
            .any(|b| mode.blocks(client, b.client) && b.cuboid.intersects(&corridor))
    }

    /// Empty voxels trapped behind `cuboid`: walking each (h, w) column of its
    /// cross-section towards the front wall, count empty voxels until the
    /// first occupied one or the wall.
    pub fn compute_waste(&self, cuboid: &Cuboid) -> u64 {
        let mut waste = 0;
        for h in cuboid.h..cuboid.h_end() {
            for w in cuboid.w..cuboid.w_end() {
                let mut l = cuboid.l;
                while l > 0 && self.cells[self.index(h, w, l - 1)] == EMPTY {
                    waste += 1;
                    l -= 1;
                }
            }
        }
        waste
    }

    /// Records `package` at `placement`. Feasibility checks are the caller's
    /// job; this only refuses overlap, out-of-bounds boxes, duplicates and
    /// weight overruns.
    pub fn place(&mut self, id: PackageId, package: &Package, placement: Placement) -> Result<()> {
        let extent = Extent::of(package, placement.rotated);
        let cuboid = Cuboid::new(placement, extent);
        if !self.contains(&cuboid) {
            return Err(Error::OutOfBounds { package: id });
        }
        if self.boxes.iter().any(|b| b.package == id) {
            return Err(Error::AlreadyPlaced(id));
        }
        if self.occupied.sum(&cuboid) != 0 {
            let other = self
                .boxes
                .iter()
                .find(|b| b.cuboid.intersects(&cuboid))
                .map(|b| b.package)
                .unwrap_or(id);
            return Err(Error::Overlap { package: id, other });
        }
        if self.weight + package.weight > self.spec.weight_capacity + 1e-9 {
            return Err(Error::Overweight { package: id });
        }
        let slot = self.boxes.len() as u32;
        for h in cuboid.h..cuboid.h_end() {
            for w in cuboid.w..cuboid.w_end() {
                let base = self.index(h, w, cuboid.l);
                self.cells[base..base + cuboid.length as usize].fill(slot);
            }
        }
        self.boxes.push(PlacedBox {
            package: id,
            client: package.client,
            fragile: package.fragile,
            weight: package.weight,
            rotated: placement.rotated,
            cuboid,
        });
        self.weight += package.weight;
        self.volume += cuboid.volume();
        self.refresh();
        Ok(())
    }

    fn refresh(&mut self) {
        let (h, w, l) = (
            self.spec.height as usize,
            self.spec.width as usize,
            self.spec.length as usize,
        );
        let cells = &self.cells;
        let boxes = &self.boxes;
        self.occupied = Prefix3::build(h, w, l, |i| u32::from(cells[i] != EMPTY));
        self.fragile = Prefix3::build(h, w, l, |i| {
            u32::from(cells[i] != EMPTY && boxes[cells[i] as usize].fragile)
        });
        for ww in 0..w {
            for ll in 0..l {
                let mut hh = 0;
                while hh < h && cells[(hh * w + ww) * l + ll] != EMPTY {
                    hh += 1;
                }
                self.lowest_empty[ww * l + ll] = hh as u32;
            }
        }
    }
}
