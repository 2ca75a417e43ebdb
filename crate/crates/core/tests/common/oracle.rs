//! Exhaustive reference for the placement scan.
//!
//! Everything here reads the container through `occupant()` only and
//! re-implements every rule with plain loops, so agreement with
//! `Container::find_placement` is evidence rather than a tautology.

use cvrp3d::container::Extent;
use cvrp3d::instance::PackageId;
use cvrp3d::{Container, LifoMode, Package, Placement, PlacementRules, VehicleSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hit {
    pub placement: Placement,
    pub waste: u64,
}

fn dims(p: &Package, rotated: bool) -> (u32, u32, u32) {
    if rotated {
        (p.height, p.length, p.width)
    } else {
        (p.height, p.width, p.length)
    }
}

fn blocks(mode: LifoMode, a: usize, b: usize) -> bool {
    match mode {
        LifoMode::SameClientExempt => a != b,
        LifoMode::Strict => true,
    }
}

pub fn feasible(c: &Container, p: &Package, rotated: bool, h: u32, w: u32, l: u32, rules: &PlacementRules) -> bool {
    let s = c.spec();
    let (ph, pw, pl) = dims(p, rotated);
    if h + ph > s.height || w + pw > s.width || l + pl > s.length {
        return false;
    }
    for hh in h..h + ph {
        for ww in w..w + pw {
            for ll in l..l + pl {
                if c.occupant(hh, ww, ll).is_some() {
                    return false;
                }
            }
        }
    }
    if h > 0 {
        let mut supported = 0u64;
        for ww in w..w + pw {
            for ll in l..l + pl {
                if let Some(below) = c.occupant(h - 1, ww, ll) {
                    supported += 1;
                    if below.fragile && !p.fragile {
                        return false;
                    }
                }
            }
        }
        if (supported as f64) < rules.a_min * (pw as u64 * pl as u64) as f64 {
            return false;
        }
    }
    if p.fragile && h + ph < s.height {
        for ww in w..w + pw {
            for ll in l..l + pl {
                if c.occupant(h + ph, ww, ll).is_some_and(|above| !above.fragile) {
                    return false;
                }
            }
        }
    }
    for hh in h..h + ph {
        for ww in w..w + pw {
            for ll in l + pl..s.length {
                if let Some(b) = c.occupant(hh, ww, ll) {
                    if blocks(rules.lifo, p.client, b.client) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn waste(c: &Container, h: u32, w: u32, l: u32, ph: u32, pw: u32) -> u64 {
    let mut n = 0;
    for hh in h..h + ph {
        for ww in w..w + pw {
            for ll in (0..l).rev() {
                if c.occupant(hh, ww, ll).is_some() {
                    break;
                }
                n += 1;
            }
        }
    }
    n
}

/// Enumerates every (rotation, l, w, h), keeps the first feasible position of
/// each rotation in scan order, then picks by waste, then by h + w + l, then
/// unrotated first.
pub fn find(c: &Container, p: &Package, rules: &PlacementRules) -> Option<Hit> {
    let s = c.spec();
    let mut best: Option<Hit> = None;
    for rotated in [false, true] {
        let (ph, pw, _) = dims(p, rotated);
        let mut first = None;
        'scan: for l in 0..s.length {
            for w in 0..s.width {
                for h in 0..s.height {
                    if feasible(c, p, rotated, h, w, l, rules) {
                        first = Some((h, w, l));
                        break 'scan;
                    }
                }
            }
        }
        let Some((h, w, l)) = first else { continue };
        let hit = Hit {
            placement: Placement { h, w, l, rotated },
            waste: waste(c, h, w, l, ph, pw),
        };
        let key = |x: &Hit| (x.waste, x.placement.h + x.placement.w + x.placement.l);
        best = match best {
            Some(b) if key(&b) <= key(&hit) => Some(b),
            _ => Some(hit),
        };
    }
    best
}

/// Column top heights recomputed from the voxel grid.
pub fn column_tops(c: &Container) -> Vec<i32> {
    let s = c.spec();
    let mut out = Vec::new();
    for w in 0..s.width {
        for l in 0..s.length {
            let mut top = 0i32;
            for h in 0..s.height {
                if c.occupant(h, w, l).is_some() {
                    top = h as i32 + 1;
                }
            }
            out.push(top);
        }
    }
    out
}

pub struct Case {
    pub container: Container,
    pub package: Package,
    pub rules: PlacementRules,
}

fn random_package(rng: &mut ChaCha8Rng, s: &VehicleSpec, clients: usize, slack: u32) -> Package {
    Package {
        client: rng.gen_range(1..=clients),
        index: 1,
        height: rng.gen_range(1..=s.height.min(4) + slack),
        width: rng.gen_range(1..=s.width.min(3) + slack),
        length: rng.gen_range(1..=s.length.min(6) + slack),
        weight: 0.0,
        fragile: rng.gen_bool(0.3),
    }
}

/// A random container of at most 6×5×12 voxels with up to ten packages,
/// filled partly by the engine's own scan and partly by arbitrary
/// non-overlapping boxes (which may float or overhang), plus a query.
pub fn random_case(seed: u64) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = VehicleSpec::new(rng.gen_range(2..=6), rng.gen_range(2..=5), rng.gen_range(4..=12), 1e9).unwrap();
    let clients = rng.gen_range(1..=3);
    let rules = PlacementRules {
        a_min: [0.0, 0.5, 0.75, 1.0][rng.gen_range(0..4)],
        lifo: if rng.gen_bool(0.8) {
            LifoMode::SameClientExempt
        } else {
            LifoMode::Strict
        },
    };
    let mut container = Container::new(spec).unwrap();
    let target = rng.gen_range(0..=10);
    let mut next = 0;
    for _ in 0..40 {
        if container.boxes().len() >= target {
            break;
        }
        let p = random_package(&mut rng, &spec, clients, 0);
        let placement = if rng.gen_bool(0.5) {
            match container.find_placement(&p, &rules) {
                Some(c) => c.placement,
                None => continue,
            }
        } else {
            let rotated = rng.gen_bool(0.5);
            let e = Extent::of(&p, rotated);
            if e.height > spec.height || e.width > spec.width || e.length > spec.length {
                continue;
            }
            Placement {
                h: rng.gen_range(0..=spec.height - e.height),
                w: rng.gen_range(0..=spec.width - e.width),
                l: rng.gen_range(0..=spec.length - e.length),
                rotated,
            }
        };
        if container.place(PackageId(next), &p, placement).is_ok() {
            next += 1;
        }
    }
    let slack = u32::from(rng.gen_bool(0.2));
    let package = random_package(&mut rng, &spec, clients, slack);
    Case {
        container,
        package,
        rules,
    }
}

/// Compares the engine's scan with [`find`] on `random_case(seed)`.
/// Returns the agreed result.
pub fn agree(seed: u64) -> Result<Option<Hit>, String> {
    let case = random_case(seed);
    let got = case
        .container
        .find_placement(&case.package, &case.rules)
        .map(|c| Hit {
            placement: c.placement,
            waste: c.waste,
        });
    let want = find(&case.container, &case.package, &case.rules);
    if got == want {
        Ok(got)
    } else {
        Err(format!(
            "seed {seed}: engine {got:?} oracle {want:?} package {:?} rules {:?}",
            case.package, case.rules
        ))
    }
}
