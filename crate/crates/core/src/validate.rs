//! Independent audit of finished solutions.
//!
//! Every vehicle is rebuilt by painting voxels from the claimed placements and
//! extents. Nothing here calls into the container module's checks, so
//! agreement between the two is evidence rather than a tautology.
//!
//! The eight constraints, in report order:
//!
//! 1. routes start and end at the depot and do not pass through it;
//! 2. clients are visited at most once, and each client's packages travel on
//!    a single vehicle that visits it;
//! 3. loaded weight stays within capacity;
//! 4. boxes lie inside the vehicle and do not overlap;
//! 5. boxes are only rotated about the vertical axis;
//! 6. no package rests on a fragile package unless it is fragile itself;
//! 7. boxes off the floor have at least `a_min` of their base supported;
//! 8. unloading in visit order slides every package out towards the door
//!    without crossing a package that is still aboard, and without leaving a
//!    remaining package under-supported.

use serde::{Deserialize, Serialize};

use crate::container::{LifoMode, PlacementRules};
use crate::error::{Error, Result};
use crate::geometry::euclidean_distance;
use crate::instance::{Instance, PackageId};
use crate::solution::{LoadedPackage, Solution};

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Offender {
    Vehicle(usize),
    Client(usize),
    Package(PackageId),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintVerdict {
    /// Constraint number, 1 to 8.
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub offenders: Vec<Offender>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub constraints: Vec<ConstraintVerdict>,
    /// Distance recomputed from the routes as given.
    pub distance: f64,
    pub loaded: usize,
    pub missed: usize,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.constraints.iter().all(|c| c.passed)
    }

    /// Ids of failed constraints in ascending order.
    pub fn failed(&self) -> Vec<u8> {
        self.constraints.iter().filter(|c| !c.passed).map(|c| c.id).collect()
    }

    pub fn verdict(&self, id: u8) -> Option<&ConstraintVerdict> {
        self.constraints.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

const NAMES: [&str; 8] = [
    "depot endpoints",
    "single visit",
    "weight capacity",
    "bounds and overlap",
    "vertical orientation",
    "fragility",
    "support",
    "unloading order",
];

/// A box as claimed by the solution: origin and extent along (h, w, l).
#[derive(Debug, Clone, Copy)]
struct Claimed {
    id: PackageId,
    client: usize,
    fragile: bool,
    origin: [u32; 3],
    size: [u32; 3],
    load_order: usize,
}

impl Claimed {
    fn end(&self, axis: usize) -> u64 {
        u64::from(self.origin[axis]) + u64::from(self.size[axis])
    }
}

/// Voxel grid holding the index of the occupying box in the vehicle's list.
struct Paint {
    dims: [u32; 3],
    cells: Vec<Option<usize>>,
}

impl Paint {
    fn new(dims: [u32; 3]) -> Self {
        let n = dims.iter().map(|&d| d as usize).product();
        Self { dims, cells: vec![None; n] }
    }

    fn idx(&self, h: u32, w: u32, l: u32) -> usize {
        ((h as usize * self.dims[1] as usize) + w as usize) * self.dims[2] as usize + l as usize
    }

    fn get(&self, h: u32, w: u32, l: u32) -> Option<usize> {
        self.cells[self.idx(h, w, l)]
    }

    /// Cells of `b` clipped to the grid.
    fn cells_of(&self, b: &Claimed) -> impl Iterator<Item = (u32, u32, u32)> {
        let hi = |a: usize| b.end(a).min(u64::from(self.dims[a])) as u32;
        let (h1, w1, l1) = (hi(0), hi(1), hi(2));
        let o = b.origin;
        (o[0].min(h1)..h1).flat_map(move |h| {
            (o[1].min(w1)..w1).flat_map(move |w| (o[2].min(l1)..l1).map(move |l| (h, w, l)))
        })
    }
}

/// Audits `solution` against `instance`. Dangling or repeated package
/// references, unknown route nodes and fleet overuse are structural errors.
pub fn validate(instance: &Instance, solution: &Solution, rules: &PlacementRules) -> Result<ValidationReport> {
    structure(instance, solution)?;
    let n = instance.num_clients();
    let mut offenders: [Vec<Offender>; 8] = Default::default();

    // 1. depot endpoints
    for (v, plan) in solution.vehicles.iter().enumerate() {
        let r = &plan.route;
        let ok = r.len() >= 2 && r[0] == 0 && r[r.len() - 1] == 0 && r[1..r.len() - 1].iter().all(|&x| x != 0);
        if !ok {
            offenders[0].push(Offender::Vehicle(v));
        }
    }

    // 2. single visit and single vehicle per client
    let mut visits = vec![0usize; n + 1];
    for plan in &solution.vehicles {
        for &node in &plan.route {
            if node != 0 {
                visits[node] += 1;
            }
        }
    }
    let mut carrier: Vec<Option<usize>> = vec![None; n + 1];
    let mut c2 = Vec::new();
    for c in (1..=n).filter(|&c| visits[c] > 1) {
        c2.push(Offender::Client(c));
    }
    for (v, plan) in solution.vehicles.iter().enumerate() {
        for lp in &plan.packages {
            let client = instance.packages()[lp.package.0].client;
            match carrier[client] {
                Some(other) if other != v => c2.push(Offender::Client(client)),
                _ => carrier[client] = Some(v),
            }
            if !plan.route.contains(&client) {
                c2.push(Offender::Package(lp.package));
            }
        }
    }
    c2.sort_by_key(sort_key);
    c2.dedup();
    offenders[1] = c2;

    // 3. weight
    for (v, plan) in solution.vehicles.iter().enumerate() {
        let w: f64 = plan.packages.iter().map(|lp| instance.packages()[lp.package.0].weight).sum();
        if w > instance.vehicle().weight_capacity + EPS {
            offenders[2].push(Offender::Vehicle(v));
        }
    }

    let spec = instance.vehicle();
    let dims = [spec.height, spec.width, spec.length];
    for plan in &solution.vehicles {
        let boxes: Vec<Claimed> = plan.packages.iter().map(|lp| claim(instance, lp)).collect();

        // 5. yaw-only rotation, consistent with the flag
        for (b, lp) in boxes.iter().zip(&plan.packages) {
            let p = &instance.packages()[b.id.0];
            let expected = if lp.placement.rotated {
                [p.height, p.length, p.width]
            } else {
                [p.height, p.width, p.length]
            };
            if b.size != expected {
                offenders[4].push(Offender::Package(b.id));
            }
        }

        // 4. bounds and overlap by painting
        let mut paint = Paint::new(dims);
        for (i, b) in boxes.iter().enumerate() {
            let inside = (0..3).all(|a| b.size[a] > 0 && b.end(a) <= u64::from(dims[a]));
            if !inside {
                offenders[3].push(Offender::Package(b.id));
            }
            let mut clash = false;
            for (h, w, l) in paint.cells_of(b).collect::<Vec<_>>() {
                let k = paint.idx(h, w, l);
                match paint.cells[k] {
                    Some(j) => {
                        clash = true;
                        offenders[3].push(Offender::Package(boxes[j].id));
                    }
                    None => paint.cells[k] = Some(i),
                }
            }
            if clash {
                offenders[3].push(Offender::Package(b.id));
            }
        }

        // 6 and 7. what each box rests on
        for b in &boxes {
            if b.origin[0] == 0 {
                continue;
            }
            let below = b.origin[0] - 1;
            if below >= dims[0] {
                continue;
            }
            let (mut supported, mut on_fragile) = (0u64, false);
            for w in b.origin[1]..(b.end(1).min(u64::from(dims[1])) as u32) {
                for l in b.origin[2]..(b.end(2).min(u64::from(dims[2])) as u32) {
                    if let Some(j) = paint.get(below, w, l) {
                        supported += 1;
                        on_fragile |= boxes[j].fragile;
                    }
                }
            }
            if on_fragile && !b.fragile {
                offenders[5].push(Offender::Package(b.id));
            }
            let area = u64::from(b.size[1]) * u64::from(b.size[2]);
            if (supported as f64) < rules.a_min * area as f64 - EPS {
                offenders[6].push(Offender::Package(b.id));
            }
        }

        // 8. unload simulation
        offenders[7].extend(unload(&plan.route, &boxes, &paint, dims, rules));
    }

    for list in &mut offenders {
        list.sort_by_key(sort_key);
        list.dedup();
    }
    let constraints = offenders
        .into_iter()
        .enumerate()
        .map(|(i, offenders)| ConstraintVerdict {
            id: i as u8 + 1,
            name: NAMES[i].to_string(),
            passed: offenders.is_empty(),
            offenders,
        })
        .collect();

    let mut distance = 0.0;
    for plan in &solution.vehicles {
        for pair in plan.route.windows(2) {
            let a = instance.location(pair[0]).expect("checked by structure");
            let b = instance.location(pair[1]).expect("checked by structure");
            distance += euclidean_distance(a, b);
        }
    }
    let loaded = solution.loaded_count();
    Ok(ValidationReport {
        constraints,
        distance,
        loaded,
        missed: instance.num_packages() - loaded,
    })
}

fn sort_key(o: &Offender) -> (u8, usize) {
    match *o {
        Offender::Vehicle(v) => (0, v),
        Offender::Client(c) => (1, c),
        Offender::Package(p) => (2, p.0),
    }
}

fn claim(instance: &Instance, lp: &LoadedPackage) -> Claimed {
    let p = &instance.packages()[lp.package.0];
    Claimed {
        id: lp.package,
        client: p.client,
        fragile: p.fragile,
        origin: [lp.placement.h, lp.placement.w, lp.placement.l],
        size: [lp.extent.height, lp.extent.width, lp.extent.length],
        load_order: lp.load_order,
    }
}

fn structure(instance: &Instance, solution: &Solution) -> Result<()> {
    if solution.vehicles.len() > instance.fleet_size() {
        return Err(Error::MalformedSolution(format!(
            "{} vehicles used but the fleet has {}",
            solution.vehicles.len(),
            instance.fleet_size()
        )));
    }
    let mut seen = vec![false; instance.num_packages()];
    for (v, plan) in solution.vehicles.iter().enumerate() {
        if let Some(&node) = plan.route.iter().find(|&&x| x > instance.num_clients()) {
            return Err(Error::MalformedSolution(format!("vehicle {v} visits unknown node {node}")));
        }
        for lp in &plan.packages {
            match seen.get_mut(lp.package.0) {
                None => return Err(Error::UnknownPackage(lp.package)),
                Some(true) => {
                    return Err(Error::MalformedSolution(format!("package {} is loaded twice", lp.package)))
                }
                Some(s) => *s = true,
            }
        }
    }
    Ok(())
}

/// Removes clients in visit order and reports packages whose exit corridor
/// is obstructed, or whose support drops below `a_min` because others left.
fn unload(route: &[usize], boxes: &[Claimed], paint: &Paint, dims: [u32; 3], rules: &PlacementRules) -> Vec<Offender> {
    let mut aboard = vec![true; boxes.len()];
    let initial: Vec<u64> = boxes.iter().map(|b| support(b, paint, dims, |_| true)).collect();
    let mut out = Vec::new();
    let mut visited = Vec::new();
    for &c in route.iter().filter(|&&c| c != 0) {
        if visited.contains(&c) {
            continue;
        }
        visited.push(c);
        let mut leaving: Vec<usize> = (0..boxes.len()).filter(|&i| aboard[i] && boxes[i].client == c).collect();
        leaving.sort_by_key(|&i| std::cmp::Reverse(boxes[i].load_order));
        match rules.lifo {
            LifoMode::SameClientExempt => {
                for &i in &leaving {
                    if blocked(i, boxes, paint, dims, &aboard, |j| boxes[j].client != c) {
                        out.push(Offender::Package(boxes[i].id));
                    }
                }
                for &i in &leaving {
                    aboard[i] = false;
                }
            }
            LifoMode::Strict => {
                for &i in &leaving {
                    if blocked(i, boxes, paint, dims, &aboard, |j| j != i) {
                        out.push(Offender::Package(boxes[i].id));
                    }
                    aboard[i] = false;
                }
            }
        }
        for (j, b) in boxes.iter().enumerate() {
            if aboard[j] {
                let now = support(b, paint, dims, |k| aboard[k]);
                let area = u64::from(b.size[1]) * u64::from(b.size[2]);
                if now < initial[j] && (now as f64) < rules.a_min * area as f64 - EPS {
                    out.push(Offender::Package(b.id));
                }
            }
        }
    }
    out
}

/// Cells directly under `b` occupied by boxes that `present` accepts.
fn support(b: &Claimed, paint: &Paint, dims: [u32; 3], present: impl Fn(usize) -> bool) -> u64 {
    if b.origin[0] == 0 || b.origin[0] > dims[0] {
        return 0;
    }
    let below = b.origin[0] - 1;
    let mut n = 0;
    for w in b.origin[1]..(b.end(1).min(u64::from(dims[1])) as u32) {
        for l in b.origin[2]..(b.end(2).min(u64::from(dims[2])) as u32) {
            if paint.get(below, w, l).is_some_and(&present) {
                n += 1;
            }
        }
    }
    n
}

/// Whether sliding box `i` towards the door crosses a box still aboard that
/// `counts` considers an obstacle.
fn blocked(
    i: usize,
    boxes: &[Claimed],
    paint: &Paint,
    dims: [u32; 3],
    aboard: &[bool],
    counts: impl Fn(usize) -> bool,
) -> bool {
    let b = &boxes[i];
    let from = b.end(2).min(u64::from(dims[2])) as u32;
    for h in b.origin[0]..(b.end(0).min(u64::from(dims[0])) as u32) {
        for w in b.origin[1]..(b.end(1).min(u64::from(dims[1])) as u32) {
            for l in from..dims[2] {
                if let Some(j) = paint.get(h, w, l) {
                    if j != i && aboard[j] && counts(j) {
                        return true;
                    }
                }
            }
        }
    }
    false
}
