//! The loading environment.
//!
//! An episode fills the fleet one vehicle at a time. Each step receives a
//! ranking of packages, most preferred first, and loads the first one that
//! passes the placement scan (and, when it would start a new client, the
//! look-ahead check that the whole client fits). When nothing can be loaded
//! the active vehicle is closed and the next one opened; when the fleet runs
//! out the remaining packages are declared missed.
//!
//! A client that has started loading stays the only admissible client until
//! all of its packages are in, so every client ends up in exactly one vehicle.
//! Routes visit clients in reverse loading order: the deepest packages are
//! delivered last.

mod observation;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::container::{observation_grid, Candidate, Container, Extent, Placement, PlacementRules};
use crate::cost::{cost, CostBreakdown};
use crate::error::{Error, Result};
use crate::instance::{Instance, PackageId};
use crate::solution::{LoadedPackage, Solution, VehiclePlan};

pub use observation::{ArrayHeader, Observation, ObservationArrays, PackageFeatures};

/// Default size of the resized heightmap observation.
pub const DEFAULT_GRID: (usize, usize) = (30, 60);

const WEIGHT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvConfig {
    pub rules: PlacementRules,
    /// Target (width, length) of the heightmap observation.
    pub grid: (usize, usize),
    /// Visit clients in reverse loading order. Disabling it keeps loading
    /// order, which leaves distances unchanged but breaks unloading order.
    pub reverse_routes: bool,
}

impl Default for EnvConfig {
    fn default() -> Self {
        Self {
            rules: PlacementRules::default(),
            grid: DEFAULT_GRID,
            reverse_routes: true,
        }
    }
}

impl EnvConfig {
    pub fn with_a_min(mut self, a_min: f64) -> Self {
        self.rules.a_min = a_min;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "state")]
pub enum PackageStatus {
    Pending,
    Loaded {
        vehicle: usize,
        placement: Placement,
        load_order: usize,
    },
    Missed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum StepEvent {
    Loaded {
        package: PackageId,
        vehicle: usize,
        placement: Placement,
        extent: Extent,
    },
    VehicleAdvanced {
        closed: usize,
        next: usize,
    },
    FleetExhausted {
        missed: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepOutcome {
    pub event: StepEvent,
    /// Candidates that went through a feasibility check.
    pub checks: usize,
    /// Ranked entries ignored because they were masked, unknown or repeated.
    pub skipped: usize,
    /// Admissible packages the ranking left out; they are tried last.
    pub unranked: usize,
    pub done: bool,
    pub observation: Observation,
}

/// Running counters over an episode.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub checks: usize,
    pub skipped: usize,
    pub unranked: usize,
    pub loads: usize,
    pub advances: usize,
}

#[derive(Debug, Clone)]
pub struct Episode {
    instance: Arc<Instance>,
    config: EnvConfig,
    containers: Vec<Container>,
    /// Client loading sequence per opened vehicle.
    sequences: Vec<Vec<usize>>,
    status: Vec<PackageStatus>,
    served_by: Vec<Option<usize>>,
    pending_of: Vec<usize>,
    pending: usize,
    open_client: Option<usize>,
    steps: usize,
    done: bool,
    diagnostics: Diagnostics,
    features: Arc<[PackageFeatures]>,
    locations: Arc<[crate::geometry::Point]>,
}

impl Episode {
    /// Starts an episode with every package pending and vehicle 0 empty.
    pub fn reset(instance: Arc<Instance>, config: EnvConfig) -> Result<(Self, Observation)> {
        let first = Container::new(*instance.vehicle())?;
        let n = instance.num_clients();
        let v = *instance.vehicle();
        let features: Arc<[PackageFeatures]> = instance
            .packages()
            .iter()
            .map(|p| PackageFeatures {
                client: p.client,
                dims: [
                    p.height as f64 / v.height as f64,
                    p.width as f64 / v.width as f64,
                    p.length as f64 / v.length as f64,
                ],
                fragile: p.fragile,
                weight: p.weight / v.weight_capacity,
                volume: p.volume(),
            })
            .collect();
        let locations = instance.clients().iter().map(|c| c.location).collect();
        let mut pending_of = vec![0; n + 1];
        for p in instance.packages() {
            pending_of[p.client] += 1;
        }
        let episode = Self {
            pending: instance.num_packages(),
            status: vec![PackageStatus::Pending; instance.num_packages()],
            served_by: vec![None; n + 1],
            pending_of,
            containers: vec![first],
            sequences: vec![Vec::new()],
            open_client: None,
            steps: 0,
            done: false,
            diagnostics: Diagnostics::default(),
            features,
            locations,
            instance,
            config,
        };
        let obs = episode.observation();
        Ok((episode, obs))
    }

    pub fn instance(&self) -> &Arc<Instance> {
        &self.instance
    }

    pub fn config(&self) -> &EnvConfig {
        &self.config
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn diagnostics(&self) -> Diagnostics {
        self.diagnostics
    }

    pub fn status(&self) -> &[PackageStatus] {
        &self.status
    }

    pub fn pending(&self) -> usize {
        self.pending
    }

    pub fn open_client(&self) -> Option<usize> {
        self.open_client
    }

    pub fn active_vehicle(&self) -> usize {
        self.containers.len() - 1
    }

    /// Containers of every vehicle opened so far.
    pub fn containers(&self) -> &[Container] {
        &self.containers
    }

    fn active(&self) -> &Container {
        self.containers.last().expect("an episode always has a vehicle")
    }

    /// Last client loaded into the active vehicle, or the depot.
    pub fn current_node(&self) -> usize {
        self.sequences.last().and_then(|s| s.last()).copied().unwrap_or(0)
    }

    /// Packages admissible without any placement scan: pending, light enough
    /// for the active vehicle, not promised to another vehicle and, while a
    /// client is being loaded, belonging to that client.
    pub fn stage1_mask(&self) -> Vec<bool> {
        if self.done {
            return vec![false; self.status.len()];
        }
        let remaining = self.active().remaining_weight();
        let active = self.active_vehicle();
        self.instance
            .packages()
            .iter()
            .zip(&self.status)
            .map(|(p, s)| {
                matches!(s, PackageStatus::Pending)
                    && p.weight <= remaining + WEIGHT_EPS
                    && self.served_by[p.client].map_or(true, |v| v == active)
                    && self.open_client.map_or(true, |c| c == p.client)
            })
            .collect()
    }

    pub fn observation(&self) -> Observation {
        let c = self.active();
        Observation {
            depot: self.instance.depot(),
            clients: self.locations.clone(),
            packages: self.features.clone(),
            remaining_capacity: if self.done {
                0.0
            } else {
                c.remaining_weight() / c.spec().weight_capacity
            },
            grid: observation_grid(&c.signed_heightmap(), c.spec(), self.config.grid),
            mask: self.stage1_mask(),
            active_vehicle: self.active_vehicle(),
            current_node: self.current_node(),
            open_client: self.open_client,
            step: self.steps,
            done: self.done,
        }
    }

    /// Pending packages of `client`, largest first (ties by id).
    fn pending_by_volume(&self, client: usize) -> Vec<PackageId> {
        let mut ids: Vec<PackageId> = self
            .instance
            .package_ids_of(client)
            .filter(|id| matches!(self.status[id.0], PackageStatus::Pending))
            .collect();
        ids.sort_by_key(|id| (std::cmp::Reverse(self.instance.packages()[id.0].volume()), *id));
        ids
    }

    /// Simulates loading `order` into a copy of the active container.
    fn simulate(&self, order: &[PackageId]) -> Option<Candidate> {
        let inst = &self.instance;
        let weight: f64 = order.iter().map(|id| inst.packages()[id.0].weight).sum();
        if weight > self.active().remaining_weight() + WEIGHT_EPS {
            return None;
        }
        let (first, rest) = order.split_first()?;
        let head = self.active().find_placement(&inst.packages()[first.0], &self.config.rules)?;
        if rest.is_empty() {
            return Some(head);
        }
        let mut scratch = self.active().clone();
        scratch.place(*first, &inst.packages()[first.0], head.placement).ok()?;
        for id in rest {
            let p = &inst.packages()[id.0];
            let c = scratch.find_placement(p, &self.config.rules)?;
            scratch.place(*id, p, c.placement).ok()?;
        }
        Some(head)
    }

    /// Whether every pending package of `client` can go into the active
    /// vehicle, placed greedily largest first on a scratch copy.
    pub fn lookahead_client_fit(&self, client: usize) -> bool {
        let order = self.pending_by_volume(client);
        !order.is_empty() && self.simulate(&order).is_some()
    }

    /// Placement for `id` such that the rest of its client still fits
    /// afterwards (loaded largest first).
    fn plan(&self, id: PackageId) -> Option<Candidate> {
        let client = self.instance.packages()[id.0].client;
        let mut order = vec![id];
        order.extend(self.pending_by_volume(client).into_iter().filter(|&o| o != id));
        self.simulate(&order)
    }

    /// Loads the first feasible package of `ranked`. Entries that are masked
    /// are skipped; admissible packages missing from the ranking are tried
    /// after it in id order.
    pub fn step(&mut self, ranked: &[PackageId]) -> Result<StepOutcome> {
        if self.done {
            return Err(Error::EpisodeDone);
        }
        let mask = self.stage1_mask();
        let mut tried = vec![false; mask.len()];
        let (mut checks, mut skipped) = (0, 0);
        let mut chosen = None;
        for &id in ranked {
            if id.0 >= mask.len() || !mask[id.0] || tried[id.0] {
                skipped += 1;
                continue;
            }
            tried[id.0] = true;
            checks += 1;
            if let Some(c) = self.plan(id) {
                chosen = Some((id, c));
                break;
            }
        }
        let mut unranked = 0;
        if chosen.is_none() {
            for i in 0..mask.len() {
                if mask[i] && !tried[i] {
                    unranked += 1;
                    checks += 1;
                    if let Some(c) = self.plan(PackageId(i)) {
                        chosen = Some((PackageId(i), c));
                        break;
                    }
                }
            }
        }
        self.steps += 1;
        self.diagnostics.checks += checks;
        self.diagnostics.skipped += skipped;
        self.diagnostics.unranked += unranked;
        let event = match chosen {
            Some((id, candidate)) => self.load(id, candidate)?,
            None => self.advance(),
        };
        Ok(StepOutcome {
            event,
            checks,
            skipped,
            unranked,
            done: self.done,
            observation: self.observation(),
        })
    }

    fn load(&mut self, id: PackageId, candidate: Candidate) -> Result<StepEvent> {
        let inst = Arc::clone(&self.instance);
        let p = &inst.packages()[id.0];
        let vehicle = self.active_vehicle();
        let load_order = self.active().boxes().len();
        self.containers[vehicle].place(id, p, candidate.placement)?;
        self.status[id.0] = PackageStatus::Loaded {
            vehicle,
            placement: candidate.placement,
            load_order,
        };
        if self.served_by[p.client].is_none() {
            self.served_by[p.client] = Some(vehicle);
            self.sequences[vehicle].push(p.client);
        }
        self.pending_of[p.client] -= 1;
        self.open_client = (self.pending_of[p.client] > 0).then_some(p.client);
        self.pending -= 1;
        self.diagnostics.loads += 1;
        if self.pending == 0 {
            self.done = true;
        }
        Ok(StepEvent::Loaded {
            package: id,
            vehicle,
            placement: candidate.placement,
            extent: candidate.extent,
        })
    }

    fn advance(&mut self) -> StepEvent {
        debug_assert!(self.open_client.is_none(), "a started client always completes");
        let closed = self.active_vehicle();
        self.diagnostics.advances += 1;
        if closed + 1 >= self.instance.fleet_size() {
            let mut missed = 0;
            for s in &mut self.status {
                if matches!(s, PackageStatus::Pending) {
                    *s = PackageStatus::Missed;
                    missed += 1;
                }
            }
            self.pending = 0;
            self.done = true;
            return StepEvent::FleetExhausted { missed };
        }
        let fresh = Container::new(*self.instance.vehicle()).expect("vehicle was validated");
        self.containers.push(fresh);
        self.sequences.push(Vec::new());
        self.open_client = None;
        StepEvent::VehicleAdvanced {
            closed,
            next: closed + 1,
        }
    }

    pub fn missed(&self) -> usize {
        self.status.iter().filter(|s| matches!(s, PackageStatus::Missed)).count()
    }

    /// Routes and placements of a finished episode, with its cost.
    pub fn finalize(&self, penalty: f64) -> Result<(Solution, CostBreakdown)> {
        if !self.done {
            return Err(Error::EpisodeNotDone);
        }
        let mut vehicles = Vec::new();
        for (container, sequence) in self.containers.iter().zip(&self.sequences) {
            if sequence.is_empty() {
                continue;
            }
            let mut clients = sequence.clone();
            if self.config.reverse_routes {
                clients.reverse();
            }
            let packages = container
                .boxes()
                .iter()
                .enumerate()
                .map(|(order, b)| LoadedPackage {
                    package: b.package,
                    placement: b.placement(),
                    extent: b.extent(),
                    load_order: order,
                })
                .collect();
            vehicles.push(VehiclePlan::from_clients(&clients, packages));
        }
        let solution = Solution { vehicles };
        let cost = cost(&solution, self.missed(), &self.instance, penalty)?;
        Ok((solution, cost))
    }
}
