//! Engine for the capacitated vehicle routing problem with three-dimensional
//! loading constraints.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`] and [`cost`]: points, route lengths and the episode cost.
//! * [`container`]: the voxelised loading space of one vehicle, the placement
//!   scan and the signed heightmap used as an observation.
//! * [`instance`]: instance model, random generation, text parsing and
//!   coordinate augmentation.
//! * [`env`]: the episodic loading/routing environment driven by ranked actions.
//! * [`policy`]: action-ranking baselines, rollouts and a repacking local search.
//! * [`validate`]: an independent auditor for finished solutions.
//! * [`bench`]: the wall-clock scaling harness.

pub mod bench;
pub mod container;
pub mod cost;
pub mod env;
pub mod error;
pub mod geometry;
pub mod instance;
pub mod policy;
pub mod solution;
pub mod validate;

pub use container::{Container, LifoMode, Placement, PlacementRules};
pub use cost::{cost, route_distance, scale_dims, total_distance, CostBreakdown};
pub use env::{EnvConfig, Episode, Observation, StepOutcome};
pub use error::{Error, ParseError, Result};
pub use geometry::{euclidean_distance, Point};
pub use instance::{Instance, Package, PackageId, VehicleSpec};
pub use solution::{Extent, LoadedPackage, Solution, VehiclePlan};
pub use validate::{validate, ValidationReport};

/// Default route-length penalty factor of the episode cost.
pub const DEFAULT_PENALTY: f64 = 2.0;

/// Default minimum supported fraction of a package base.
pub const DEFAULT_A_MIN: f64 = 0.75;
