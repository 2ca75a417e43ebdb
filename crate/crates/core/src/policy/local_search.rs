//! Route improvement with repacking.
//!
//! Each round enumerates client relocations and swaps between vehicles,
//! intra-route 2-opt reversals and insertions of unserved clients (directly
//! or after moving one client out of the way), keeps the moves that lower
//! the episode cost, and applies the best one whose affected vehicles can be
//! repacked from scratch. Moves that do not change
//! the set of served clients are therefore accepted only on a strict
//! distance decrease.

use std::collections::HashMap;

use crate::container::{Container, PlacementRules};
use crate::cost::star_distance;
use crate::error::{Error, Result};
use crate::geometry::euclidean_distance;
use crate::instance::{Instance, PackageId};
use crate::solution::{LoadedPackage, Solution, VehiclePlan};
use crate::validate::validate;

const GAIN_EPS: f64 = 1e-12;

/// Sort key for a client's packages, largest first.
type OrderKey = fn(&crate::Package) -> (u64, u64);

/// Loads the clients of a route into an empty vehicle, last stop first.
/// Each client's packages go in largest first; when that fails a few other
/// deterministic orders are tried. Returns `None` if no order fits.
pub fn repack(instance: &Instance, clients: &[usize], rules: &PlacementRules) -> Option<Vec<LoadedPackage>> {
    let weight: f64 = clients.iter().map(|&c| instance.client_weight(c)).sum();
    if weight > instance.vehicle().weight_capacity + 1e-9 {
        return None;
    }
    let keys: [OrderKey; 3] = [
        |p| (p.volume(), 0),
        |p| (u64::from(p.width) * u64::from(p.length), u64::from(p.height)),
        |p| (u64::from(p.length.max(p.width)), p.volume()),
    ];
    keys.iter().find_map(|key| pack_with(instance, clients, rules, *key))
}

fn pack_with(
    instance: &Instance,
    clients: &[usize],
    rules: &PlacementRules,
    key: OrderKey,
) -> Option<Vec<LoadedPackage>> {
    let mut container = Container::new(*instance.vehicle()).ok()?;
    let mut loaded = Vec::new();
    for &c in clients.iter().rev() {
        let mut ids: Vec<PackageId> = instance.package_ids_of(c).collect();
        ids.sort_by_key(|id| (std::cmp::Reverse(key(&instance.packages()[id.0])), *id));
        for id in ids {
            let p = &instance.packages()[id.0];
            let cand = container.find_placement(p, rules)?;
            container.place(id, p, cand.placement).ok()?;
            loaded.push(LoadedPackage {
                package: id,
                placement: cand.placement,
                extent: cand.extent,
                load_order: loaded.len(),
            });
        }
    }
    Some(loaded)
}

#[derive(Debug, Clone)]
enum Move {
    TwoOpt { r: usize, i: usize, j: usize },
    Relocate { from: usize, i: usize, to: usize, k: usize },
    Swap { a: usize, i: usize, b: usize, j: usize },
    Insert { client: usize, to: usize, k: usize },
    /// Insert an unserved client into `to` after moving the client at `i`
    /// of `to` into `dest` at `kk`.
    Eject { client: usize, to: usize, k: usize, i: usize, dest: usize, kk: usize },
}

struct Search<'a> {
    instance: &'a Instance,
    rules: &'a PlacementRules,
    dist: Vec<Vec<f64>>,
    routes: Vec<Vec<usize>>,
    packs: Vec<Vec<LoadedPackage>>,
    unserved: Vec<usize>,
    /// Cost of one unit of distance and of one missed package.
    per_distance: f64,
    per_package: f64,
    cache: HashMap<Vec<usize>, Option<Vec<LoadedPackage>>>,
}

impl<'a> Search<'a> {
    fn length(&self, route: &[usize]) -> f64 {
        let mut prev = 0;
        let mut total = 0.0;
        for &c in route {
            total += self.dist[prev][c];
            prev = c;
        }
        total + self.dist[prev][0]
    }

    fn packages_of(&self, client: usize) -> f64 {
        self.instance.package_ids_of(client).count() as f64
    }

    /// Routes a move rewrites, as (vehicle, new client sequence), plus the
    /// client it starts serving.
    fn apply(&self, m: &Move) -> (Vec<(usize, Vec<usize>)>, Option<usize>) {
        let rs = &self.routes;
        match *m {
            Move::TwoOpt { r, i, j } => {
                let mut route = rs[r].clone();
                route[i..=j].reverse();
                (vec![(r, route)], None)
            }
            Move::Relocate { from, i, to, k } => {
                let c = rs[from][i];
                if from == to {
                    let mut route = rs[from].clone();
                    route.remove(i);
                    route.insert(k, c);
                    (vec![(from, route)], None)
                } else {
                    let mut src = rs[from].clone();
                    src.remove(i);
                    let mut dst = rs[to].clone();
                    dst.insert(k, c);
                    (vec![(from, src), (to, dst)], None)
                }
            }
            Move::Swap { a, i, b, j } => {
                let mut ra = rs[a].clone();
                let mut rb = rs[b].clone();
                std::mem::swap(&mut ra[i], &mut rb[j]);
                (vec![(a, ra), (b, rb)], None)
            }
            Move::Insert { client, to, k } => {
                let mut dst = rs[to].clone();
                dst.insert(k, client);
                (vec![(to, dst)], Some(client))
            }
            Move::Eject { client, to, k, i, dest, kk } => {
                let mut dst = rs[to].clone();
                let x = dst.remove(i);
                dst.insert(k, client);
                let mut other = rs[dest].clone();
                other.insert(kk, x);
                (vec![(to, dst), (dest, other)], Some(client))
            }
        }
    }

    fn delta(&self, m: &Move) -> f64 {
        let (changed, served) = self.apply(m);
        let mut d = 0.0;
        for (v, route) in &changed {
            d += (self.length(route) - self.length(&self.routes[*v])) * self.per_distance;
        }
        if let Some(c) = served {
            d -= self.packages_of(c) * self.per_package;
        }
        d
    }

    fn moves(&self) -> Vec<Move> {
        let rs = &self.routes;
        let mut out = Vec::new();
        for (r, route) in rs.iter().enumerate() {
            for i in 0..route.len() {
                for j in i + 1..route.len() {
                    out.push(Move::TwoOpt { r, i, j });
                }
            }
        }
        for from in 0..rs.len() {
            for i in 0..rs[from].len() {
                for to in 0..rs.len() {
                    if to == from {
                        for k in 0..rs[from].len() {
                            if k != i {
                                out.push(Move::Relocate { from, i, to, k });
                            }
                        }
                    } else {
                        for k in 0..=rs[to].len() {
                            out.push(Move::Relocate { from, i, to, k });
                        }
                    }
                }
            }
        }
        for a in 0..rs.len() {
            for b in a + 1..rs.len() {
                for i in 0..rs[a].len() {
                    for j in 0..rs[b].len() {
                        out.push(Move::Swap { a, i, b, j });
                    }
                }
            }
        }
        for &client in &self.unserved {
            for to in 0..rs.len() {
                for k in 0..=rs[to].len() {
                    out.push(Move::Insert { client, to, k });
                }
                for i in 0..rs[to].len() {
                    for k in 0..rs[to].len() {
                        for dest in (0..rs.len()).filter(|&d| d != to) {
                            for kk in 0..=rs[dest].len() {
                                out.push(Move::Eject { client, to, k, i, dest, kk });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn packed(&mut self, route: &[usize]) -> Option<Vec<LoadedPackage>> {
        if route.is_empty() {
            return Some(Vec::new());
        }
        if let Some(hit) = self.cache.get(route) {
            return hit.clone();
        }
        let result = repack(self.instance, route, self.rules);
        self.cache.insert(route.to_vec(), result.clone());
        result
    }

    /// Applies the best improving move that repacks. Returns false when
    /// none exists.
    fn round(&mut self) -> bool {
        let mut scored: Vec<(f64, usize, Move)> = self
            .moves()
            .into_iter()
            .enumerate()
            .filter_map(|(n, m)| {
                let d = self.delta(&m);
                (d < -GAIN_EPS).then_some((d, n, m))
            })
            .collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for (_, _, m) in scored {
            let (changed, served) = self.apply(&m);
            let mut packs = Vec::with_capacity(changed.len());
            for (_, route) in &changed {
                match self.packed(route) {
                    Some(p) => packs.push(p),
                    None => break,
                }
            }
            if packs.len() < changed.len() {
                continue;
            }
            for ((v, route), p) in changed.into_iter().zip(packs) {
                self.routes[v] = route;
                self.packs[v] = p;
            }
            if let Some(c) = served {
                self.unserved.retain(|&u| u != c);
            }
            return true;
        }
        false
    }
}

/// Improves a valid solution for at most `budget` rounds. The episode cost
/// with `penalty` never increases; a round that finds no repackable
/// improving move ends the search early.
pub fn local_search(
    solution: &Solution,
    instance: &Instance,
    budget: usize,
    penalty: f64,
    rules: &PlacementRules,
) -> Result<Solution> {
    let report = validate(instance, solution, rules)?;
    if !report.passed() {
        return Err(Error::InvalidSolution(format!("constraints {:?} fail", report.failed())));
    }
    if !(penalty.is_finite() && penalty > 0.0) {
        return Err(Error::InvalidPenalty(penalty));
    }
    if budget == 0 {
        return Ok(solution.clone());
    }
    let n = instance.num_clients();
    let locs: Vec<_> = (0..=n).map(|i| instance.location(i).expect("node in range")).collect();
    let dist = locs
        .iter()
        .map(|a| locs.iter().map(|b| euclidean_distance(*a, *b)).collect())
        .collect();
    let mut routes: Vec<Vec<usize>> = solution.vehicles.iter().map(VehiclePlan::clients).collect();
    let mut packs: Vec<Vec<LoadedPackage>> = solution.vehicles.iter().map(|v| v.packages.clone()).collect();
    routes.resize(instance.fleet_size(), Vec::new());
    packs.resize(instance.fleet_size(), Vec::new());
    let served: Vec<bool> = {
        let mut s = vec![false; n + 1];
        for r in &routes {
            for &c in r {
                s[c] = true;
            }
        }
        s
    };
    let mut search = Search {
        instance,
        rules,
        dist,
        routes,
        packs,
        unserved: (1..=n).filter(|&c| !served[c]).collect(),
        per_distance: 1.0 / (penalty * star_distance(instance)),
        per_package: 1.0 / n as f64,
        cache: HashMap::new(),
    };
    for _ in 0..budget {
        if !search.round() {
            break;
        }
    }
    let vehicles = search
        .routes
        .iter()
        .zip(search.packs)
        .filter(|(r, _)| !r.is_empty())
        .map(|(r, p)| VehiclePlan::from_clients(r, p))
        .collect();
    Ok(Solution { vehicles })
}
